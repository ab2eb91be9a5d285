#pragma once

#include <string>

#include "rankeval/matrix.hpp"
#include "rankeval/ranking.hpp"

namespace rankeval {

enum class EmbeddingFileFormat { delimited_text, raw_binary };

EmbeddingFileFormat format_from_name(const std::string& name);

/// delimited_text: one sample per line, comma-separated numeric fields.
/// raw_binary: 16-byte header (magic "EMB1", u32-le rows, u32-le dim, 4 zero
/// bytes) followed by row-major little-endian f64 values.
EmbeddingMatrix load_embeddings(const std::string& path, EmbeddingFileFormat format);

void save_embeddings(const EmbeddingMatrix& m, const std::string& path,
                     EmbeddingFileFormat format);

/// One UTF-8 label token per line; empty lines and empty files are rejected.
LabelVector load_labels(const std::string& path);

/// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace rankeval
