#include "rankeval/distances.hpp"

#include <algorithm>
#include <cmath>

namespace rankeval {

DistanceMetricKind metric_from_name(const std::string& name) {
    if (name == "euclidean") return DistanceMetricKind::euclidean;
    if (name == "cosine") return DistanceMetricKind::cosine;
    if (name == "cityblock") return DistanceMetricKind::cityblock;
    throw InputError("unknown distance metric: " + name);
}

std::string metric_name(DistanceMetricKind kind) {
    switch (kind) {
        case DistanceMetricKind::euclidean: return "euclidean";
        case DistanceMetricKind::cosine: return "cosine";
        case DistanceMetricKind::cityblock: return "cityblock";
    }
    return "?";
}

PrecisionMode precision_from_name(const std::string& name) {
    if (name == "double") return PrecisionMode::full_double;
    if (name == "single") return PrecisionMode::emulated_single;
    throw InputError("unknown precision mode: " + name);
}

std::string precision_name(PrecisionMode mode) {
    return mode == PrecisionMode::full_double ? "double" : "single";
}

namespace {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double cityblock_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::fabs(a[i] - b[i]);
    return s;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na2 = 0.0, nb2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na2 += a[i] * a[i];
        nb2 += b[i] * b[i];
    }
    if (na2 == 0.0 && nb2 == 0.0) return 0.0;
    if (na2 == 0.0 || nb2 == 0.0) return 1.0;
    // Identical rows accumulate identical sums; pin their distance to 0.
    if (dot == na2 && dot == nb2) return 0.0;
    double r = dot / std::sqrt(na2 * nb2);
    r = std::clamp(r, -1.0, 1.0);
    return 1.0 - r;
}

} // namespace

double metric_distance(std::span<const double> a, std::span<const double> b,
                       DistanceMetricKind kind) {
    if (a.size() != b.size())
        throw InputError("dimension mismatch in distance computation");
    switch (kind) {
        case DistanceMetricKind::euclidean: return euclidean_distance(a, b);
        case DistanceMetricKind::cityblock: return cityblock_distance(a, b);
        case DistanceMetricKind::cosine: return cosine_distance(a, b);
    }
    return 0.0;
}

DistanceMatrix pairwise_distances(const EmbeddingMatrix& queries,
                                  const EmbeddingMatrix& database,
                                  DistanceMetricKind metric,
                                  PrecisionMode precision) {
    queries.validate();
    database.validate();
    if (queries.dim != database.dim)
        throw InputError("query dim " + std::to_string(queries.dim) +
                         " does not match database dim " + std::to_string(database.dim));

    const bool single = precision == PrecisionMode::emulated_single;
    DistanceMatrix out(queries.rows, database.rows);

    // The kernel is symmetric in its arguments bit-for-bit, so self-comparison
    // only needs the upper triangle.
    const bool self = &queries == &database;
    for (std::size_t q = 0; q < queries.rows; ++q) {
        for (std::size_t k = self ? q : 0; k < database.rows; ++k) {
            double v = metric_distance(queries.row(q), database.row(k), metric);
            if (single) v = static_cast<double>(static_cast<float>(v));
            out.at(q, k) = v;
            if (self) out.at(k, q) = v;
        }
    }
    return out;
}

} // namespace rankeval
