#pragma once

#include <span>
#include <string>

#include "rankeval/matrix.hpp"

namespace rankeval {

enum class DistanceMetricKind { euclidean, cosine, cityblock };

/// emulated_single computes in double and rounds each final distance to the
/// nearest 32-bit float, reproducing output quantization without changing
/// the accumulation path.
enum class PrecisionMode { full_double, emulated_single };

DistanceMetricKind metric_from_name(const std::string& name);
std::string metric_name(DistanceMetricKind kind);
PrecisionMode precision_from_name(const std::string& name);
std::string precision_name(PrecisionMode mode);

/// Distance between two vectors of equal length, accumulated in double.
/// Cosine convention: zero-zero pairs -> 0, zero-nonzero pairs -> 1.
double metric_distance(std::span<const double> a, std::span<const double> b,
                       DistanceMetricKind kind);

/// All pairwise distances between query rows and database rows.
/// Entries are independent; the result is bit-identical for a given input
/// regardless of evaluation order.
DistanceMatrix pairwise_distances(const EmbeddingMatrix& queries,
                                  const EmbeddingMatrix& database,
                                  DistanceMetricKind metric,
                                  PrecisionMode precision);

} // namespace rankeval
