#pragma once

#include <string>
#include <vector>

#include "rankeval/collision.hpp"
#include "rankeval/distances.hpp"
#include "rankeval/matrix.hpp"
#include "rankeval/ranking.hpp"
#include "rankeval/tie_expectation.hpp"

namespace rankeval {

enum class ScoreKind { map, map_minus, map_plus, expected };

ScoreKind score_from_name(const std::string& name);
std::string score_name(ScoreKind kind);

/// Everything the evaluator needs for one run. Leave-one-out requires the
/// database to be the query set itself.
struct DatasetBundle {
    EmbeddingMatrix queries;
    EmbeddingMatrix database;
    LabelVector query_labels;
    LabelVector db_labels;
    bool leave_one_out = false;
    DistanceMetricKind metric = DistanceMetricKind::euclidean;
    PrecisionMode precision = PrecisionMode::full_double;
    TiePolicy policy = TiePolicy::stable();
};

struct EvaluateConfig {
    ExpectationConfig expectation;
    double collision_threshold = 1e-10;
    std::vector<std::size_t> precision_ranks = {1, 5, 10};
    bool per_query_ap = false;
    ScoreKind score = ScoreKind::map_minus;
};

struct EvaluationReport {
    std::size_t queries = 0;
    std::size_t database_size = 0;
    std::string metric;
    std::string precision_mode;
    std::string tie_policy;
    bool leave_one_out = false;
    double epsilon_used = 0.0;
    double map = 0.0;
    double map_minus = 0.0;
    double map_plus = 0.0;
    double expected_map = 0.0;
    bool expected_exact = true;
    std::uint64_t expectation_samples = 0;
    std::string score_kind;
    double score = 0.0;
    std::vector<std::pair<std::size_t, double>> precision_at_rank; ///< mean Pr@k
    CollisionReport collisions;
    std::vector<double> per_query_ap; ///< empty unless requested

    /// Deterministic single-document JSON; reals carry 17 significant digits.
    std::string to_json() const;
};

/// Full pipeline: distances once, relevance with identity exclusion under
/// leave-one-out, measured mAP under the bundle's tie policy, both bounds,
/// the tie expectation, and a collision summary.
EvaluationReport run_evaluate(const DatasetBundle& bundle,
                              const EvaluateConfig& config = {});

} // namespace rankeval
