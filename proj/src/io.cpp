#include "rankeval/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rankeval {

static_assert(std::endian::native == std::endian::little,
              "raw-binary embedding format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

double parse_field(const std::string& line, std::size_t begin, std::size_t end,
                   std::size_t line_no) {
    while (begin < end && (line[begin] == ' ' || line[begin] == '\t')) ++begin;
    while (end > begin && (line[end - 1] == ' ' || line[end - 1] == '\t')) --end;
    if (begin == end)
        throw InputError("line " + std::to_string(line_no) + ": empty numeric field");
    double value = 0.0;
    const auto result = std::from_chars(line.data() + begin, line.data() + end, value);
    if (result.ec != std::errc{} || result.ptr != line.data() + end)
        throw InputError("line " + std::to_string(line_no) + ": bad numeric field '" +
                         line.substr(begin, end - begin) + "'");
    return value;
}

EmbeddingMatrix load_text(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    EmbeddingMatrix m;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::size_t line_no = i + 1;
        if (line.empty())
            throw InputError("line " + std::to_string(line_no) + ": empty row");
        std::size_t dim = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            m.values.push_back(parse_field(line, start, end, line_no));
            ++dim;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (m.rows == 0) {
            m.dim = dim;
        } else if (dim != m.dim) {
            throw InputError("line " + std::to_string(line_no) + ": row has " +
                             std::to_string(dim) + " fields, expected " +
                             std::to_string(m.dim));
        }
        ++m.rows;
    }
    if (m.rows == 0)
        throw InputError("embedding file is empty: " + path);
    m.validate();
    return m;
}

std::uint32_t read_u32le(const char* p) {
    std::uint32_t v;
    std::memcpy(&v, p, 4);
    return v;
}

EmbeddingMatrix load_binary(const std::string& path) {
    const std::string data = read_file(path);
    if (data.size() < 16)
        throw InputError("binary embedding file too short for header: " + path);
    if (std::memcmp(data.data(), kMagic, 4) != 0)
        throw InputError("bad magic in binary embedding file: " + path);
    const std::uint32_t rows = read_u32le(data.data() + 4);
    const std::uint32_t dim = read_u32le(data.data() + 8);
    if (read_u32le(data.data() + 12) != 0)
        throw InputError("reserved header bytes are not zero: " + path);
    const std::size_t expected = 16 + static_cast<std::size_t>(rows) * dim * 8;
    if (data.size() != expected)
        throw InputError("binary embedding payload size mismatch: expected " +
                         std::to_string(expected) + " bytes, got " +
                         std::to_string(data.size()));
    EmbeddingMatrix m;
    m.rows = rows;
    m.dim = dim;
    m.values.resize(static_cast<std::size_t>(rows) * dim);
    std::memcpy(m.values.data(), data.data() + 16, m.values.size() * 8);
    m.validate();
    return m;
}

} // namespace

EmbeddingFileFormat format_from_name(const std::string& name) {
    if (name == "text") return EmbeddingFileFormat::delimited_text;
    if (name == "binary") return EmbeddingFileFormat::raw_binary;
    throw InputError("unknown embedding format: " + name);
}

EmbeddingMatrix load_embeddings(const std::string& path, EmbeddingFileFormat format) {
    return format == EmbeddingFileFormat::delimited_text ? load_text(path)
                                                         : load_binary(path);
}

void save_embeddings(const EmbeddingMatrix& m, const std::string& path,
                     EmbeddingFileFormat format) {
    m.validate();
    std::string out;
    if (format == EmbeddingFileFormat::delimited_text) {
        char buf[64];
        for (std::size_t r = 0; r < m.rows; ++r) {
            for (std::size_t c = 0; c < m.dim; ++c) {
                std::snprintf(buf, sizeof buf, "%.17g", m.at(r, c));
                if (c) out += ',';
                out += buf;
            }
            out += '\n';
        }
    } else {
        out.append(kMagic, 4);
        const std::uint32_t rows = static_cast<std::uint32_t>(m.rows);
        const std::uint32_t dim = static_cast<std::uint32_t>(m.dim);
        out.append(reinterpret_cast<const char*>(&rows), 4);
        out.append(reinterpret_cast<const char*>(&dim), 4);
        out.append(4, '\0');
        out.append(reinterpret_cast<const char*>(m.values.data()), m.values.size() * 8);
    }
    write_file_atomic(path, out);
}

LabelVector load_labels(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    if (lines.empty())
        throw InputError("label file is empty: " + path);
    LabelVector labels;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty())
            throw InputError("label file line " + std::to_string(i + 1) + " is empty");
        labels.push_back(lines[i]);
    }
    return labels;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write file: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw InputError("failed writing file: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw InputError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

} // namespace rankeval
