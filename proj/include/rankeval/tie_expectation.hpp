#pragma once

#include <cstdint>
#include <span>

#include "rankeval/matrix.hpp"
#include "rankeval/ranking.hpp"

namespace rankeval {

/// One maximal group of exactly-equal distances within a ranked query row,
/// annotated with the retrieval state just before the group.
struct EquidistantRun {
    std::size_t query_index = 0;
    std::size_t retrieved_before = 0; ///< samples ranked strictly closer
    std::size_t relevant_before = 0;  ///< relevant samples among those
    std::size_t length = 0;
    std::size_t relevant_count = 0;   ///< relevant samples inside the run
    double distance = 0.0;

    /// Only runs holding both relevant and non-relevant samples are ambiguous.
    bool mixed() const { return relevant_count > 0 && relevant_count < length; }
};

struct RunExpectation {
    double value = 0.0;
    bool exact = true;
    std::uint64_t samples_used = 0;
};

struct ExpectationConfig {
    std::uint64_t enumeration_budget = 1'000'000;
    std::uint64_t mc_samples = 100'000;
    std::uint64_t seed = 0;
};

struct ExpectationResult {
    double expected_map = 0.0;
    bool exact = true;
    std::uint64_t samples_used = 0;
};

/// Maximal equal-distance groups of one row, ordered by distance.
/// Membership is exact bitwise equality; excluded cells are skipped.
std::vector<EquidistantRun> extract_runs(std::span<const double> d_row,
                                         std::span<const std::uint8_t> rel_row,
                                         std::span<const std::uint8_t> excluded_row,
                                         std::size_t query_index = 0);

std::vector<std::vector<EquidistantRun>> extract_all_runs(const DistanceMatrix& d,
                                                          const RelevanceMatrix& r);

/// Expected sum, over the run's relevant samples, of precision at their rank,
/// under the uniform distribution on all C(length, relevant_count) placements.
/// Enumerates exhaustively when the placement count fits the budget, otherwise
/// falls back to seeded Monte-Carlo.
RunExpectation run_expected_contribution(const EquidistantRun& run,
                                         std::uint64_t enumeration_budget,
                                         std::uint64_t mc_samples,
                                         std::uint64_t seed);

/// Exact expected mAP under independent uniform resolution of every run.
ExpectationResult expected_map(const DistanceMatrix& d, const RelevanceMatrix& r,
                               const ExpectationConfig& config = {});

} // namespace rankeval
