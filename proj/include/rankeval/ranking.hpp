#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankeval/matrix.hpp"

namespace rankeval {

using Label = std::string;
using LabelVector = std::vector<Label>;

/// Binary relevance with an exclusion mask for self-matches.
struct RelevanceMatrix {
    std::size_t q_rows = 0;
    std::size_t k_cols = 0;
    std::vector<std::uint8_t> rel;
    std::vector<std::uint8_t> excluded;

    RelevanceMatrix() = default;
    RelevanceMatrix(std::size_t q, std::size_t k)
        : q_rows(q), k_cols(k), rel(q * k, 0), excluded(q * k, 0) {}

    bool relevant(std::size_t q, std::size_t k) const { return rel[q * k_cols + k] != 0; }
    bool is_excluded(std::size_t q, std::size_t k) const { return excluded[q * k_cols + k] != 0; }

    /// Relevant, non-excluded cells in row q.
    std::size_t row_relevant_count(std::size_t q) const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < k_cols; ++k)
            if (relevant(q, k) && !is_excluded(q, k)) ++n;
        return n;
    }
};

/// How equal distances are ordered inside the ranking.
struct TiePolicy {
    enum class Kind { stable_by_index, favorable, unfavorable, seeded_shuffle };
    Kind kind = Kind::stable_by_index;
    std::uint64_t seed = 0;

    static TiePolicy stable() { return {Kind::stable_by_index, 0}; }
    static TiePolicy favorable() { return {Kind::favorable, 0}; }
    static TiePolicy unfavorable() { return {Kind::unfavorable, 0}; }
    static TiePolicy shuffle(std::uint64_t seed) { return {Kind::seeded_shuffle, seed}; }

    std::string name() const;
    static TiePolicy from_name(const std::string& name);
};

/// Relevance rows reordered by ascending distance, exclusions dropped.
/// order[q][r] is the database index ranked at position r for query q.
struct CorrectMatrix {
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<std::vector<std::size_t>> order;

    std::size_t q_rows() const { return rows.size(); }
};

struct PrecisionRecallMatrices {
    std::vector<std::vector<double>> precision;
    std::vector<std::vector<double>> recall;
};

/// self_map: empty for no exclusions, otherwise one database index per query
/// (-1 to leave a query unexcluded). Queries left with zero relevant
/// non-excluded cells are rejected.
RelevanceMatrix relevance(const LabelVector& query_labels,
                          const LabelVector& db_labels,
                          const std::vector<std::ptrdiff_t>& self_map = {});

CorrectMatrix rank_correct(const DistanceMatrix& d, const RelevanceMatrix& r,
                           TiePolicy policy);

PrecisionRecallMatrices precision_recall(const CorrectMatrix& c);

double average_precision(std::span<const std::uint8_t> c_row);

/// Mean of per-query AP. The AP values are sorted ascending before summation
/// so the result is bit-identical under any permutation of the queries.
double mean_average_precision(const CorrectMatrix& c);

/// Pr(q, k) for every query; k is a 1-based rank.
std::vector<double> precision_at_k(const CorrectMatrix& c, std::size_t k);

/// Sorted-ascending sequential sum divided by count; the deterministic
/// reduction used for every mean in this library.
double sorted_mean(std::vector<double> values);

} // namespace rankeval
