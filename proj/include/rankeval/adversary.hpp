#pragma once

#include <cstdint>

#include "rankeval/ranking.hpp"
#include "rankeval/tie_expectation.hpp"

namespace rankeval {

/// Leave-one-out self-classification over all-zero embeddings; the measured
/// mAP depends only on the sample order and the evaluator's tie handling.
struct ExploitInstance {
    LabelVector labels;
    std::vector<std::size_t> sample_order; ///< permutation of the samples
    std::size_t dim = 1000;

    /// classes * per_class samples labeled c0..c{classes-1}, identity order.
    static ExploitInstance uniform_classes(std::size_t classes, std::size_t per_class,
                                           std::size_t dim);
    void validate() const;
};

double evaluate_with_order(const ExploitInstance& instance, TiePolicy policy);

/// Class-contiguous blocks, classes in first-appearance order.
std::vector<std::size_t> favorable_order(const LabelVector& labels);
/// Round-robin interleaving across classes.
std::vector<std::size_t> unfavorable_order(const LabelVector& labels);

enum class OrderObjective { maximize, minimize };

struct OrderSearchResult {
    std::vector<std::size_t> order;
    double measured_map = 0.0;
    std::uint64_t evaluations = 0;
};

/// Seeded hill-climbing over pairwise swaps, starting from the heuristic
/// order matching the objective. Never returns worse than its start.
OrderSearchResult search_order(const LabelVector& labels, OrderObjective objective,
                               std::uint64_t budget, std::uint64_t seed);

struct BaselineSummary {
    std::size_t repetitions = 0;
    double mean_map = 0.0;
    double std_map = 0.0;
    std::uint64_t seed = 0;
};

/// Leave-one-out mAP of uniform [0,1) embeddings, repeated with fresh draws.
BaselineSummary random_baseline(const LabelVector& labels, std::size_t dim,
                                std::size_t repetitions, std::uint64_t seed);

struct ExploitReport {
    double measured_map = 0.0;
    double map_minus = 0.0;
    double map_plus = 0.0;
    double expected_map = 0.0;
    bool expected_exact = true;
    std::uint64_t expectation_samples = 0;
    double epsilon_used = 0.0;
    double baseline_mean = 0.0;
    double baseline_std = 0.0;
    std::size_t baseline_repetitions = 0;
};

/// Side-by-side view of the exploitable measured mAP and the order-invariant
/// quantities that defuse it.
ExploitReport exploit_report(const ExploitInstance& instance,
                             const ExpectationConfig& expectation,
                             std::size_t baseline_repetitions,
                             std::uint64_t baseline_seed);

namespace detail {
/// mAP of the fully tied instance under the stable-by-index policy, computed
/// without materializing distances. Matches the full pipeline bit-for-bit.
double fully_tied_map(const LabelVector& ordered_labels);
} // namespace detail

} // namespace rankeval
