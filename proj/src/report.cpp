#include "rankeval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rankeval/tie_bounds.hpp"

namespace rankeval {

ScoreKind score_from_name(const std::string& name) {
    if (name == "map") return ScoreKind::map;
    if (name == "map-minus") return ScoreKind::map_minus;
    if (name == "map-plus") return ScoreKind::map_plus;
    if (name == "expected") return ScoreKind::expected;
    throw InputError("unknown score selector: " + name);
}

std::string score_name(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::map: return "map";
        case ScoreKind::map_minus: return "map-minus";
        case ScoreKind::map_plus: return "map-plus";
        case ScoreKind::expected: return "expected";
    }
    return "?";
}

namespace {

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string EvaluationReport::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"queries\": " << queries << ",\n";
    os << "  \"database_size\": " << database_size << ",\n";
    os << "  \"metric\": \"" << metric << "\",\n";
    os << "  \"precision_mode\": \"" << precision_mode << "\",\n";
    os << "  \"tie_policy\": \"" << tie_policy << "\",\n";
    os << "  \"leave_one_out\": " << (leave_one_out ? "true" : "false") << ",\n";
    os << "  \"epsilon_used\": " << fmt_real(epsilon_used) << ",\n";
    os << "  \"map\": " << fmt_real(map) << ",\n";
    os << "  \"map_minus\": " << fmt_real(map_minus) << ",\n";
    os << "  \"map_plus\": " << fmt_real(map_plus) << ",\n";
    os << "  \"expected_map\": " << fmt_real(expected_map) << ",\n";
    os << "  \"expected_exact\": " << (expected_exact ? "true" : "false") << ",\n";
    os << "  \"expectation_samples\": " << expectation_samples << ",\n";
    os << "  \"score_kind\": \"" << score_kind << "\",\n";
    os << "  \"score\": " << fmt_real(score) << ",\n";
    os << "  \"precision_at_k\": {";
    for (std::size_t i = 0; i < precision_at_rank.size(); ++i) {
        if (i) os << ", ";
        os << "\"" << precision_at_rank[i].first << "\": "
           << fmt_real(precision_at_rank[i].second);
    }
    os << "},\n";
    os << "  \"collisions\": {\"threshold\": " << fmt_real(collisions.threshold)
       << ", \"total_runs\": " << collisions.total_runs
       << ", \"mixed_runs\": " << collisions.mixed_runs
       << ", \"colliding_cells\": " << collisions.colliding_cells << "}";
    if (!per_query_ap.empty()) {
        os << ",\n  \"per_query_ap\": [";
        for (std::size_t i = 0; i < per_query_ap.size(); ++i) {
            if (i) os << ", ";
            os << fmt_real(per_query_ap[i]);
        }
        os << "]";
    }
    os << "\n}\n";
    return os.str();
}

EvaluationReport run_evaluate(const DatasetBundle& bundle, const EvaluateConfig& config) {
    if (bundle.query_labels.size() != bundle.queries.rows)
        throw InputError("query label count does not match query rows");
    if (bundle.db_labels.size() != bundle.database.rows)
        throw InputError("database label count does not match database rows");
    if (bundle.leave_one_out) {
        if (bundle.queries.rows != bundle.database.rows ||
            bundle.queries.values != bundle.database.values ||
            bundle.query_labels != bundle.db_labels)
            throw InputError("leave-one-out requires queries and database to be "
                             "the same sample set");
    }

    const DistanceMatrix d = pairwise_distances(bundle.queries, bundle.database,
                                                bundle.metric, bundle.precision);

    std::vector<std::ptrdiff_t> self_map;
    if (bundle.leave_one_out) {
        self_map.resize(bundle.queries.rows);
        for (std::size_t i = 0; i < self_map.size(); ++i)
            self_map[i] = static_cast<std::ptrdiff_t>(i);
    }
    const RelevanceMatrix r = relevance(bundle.query_labels, bundle.db_labels, self_map);

    const CorrectMatrix c = rank_correct(d, r, bundle.policy);

    EvaluationReport report;
    report.queries = d.q_rows;
    report.database_size = d.k_cols;
    report.metric = metric_name(bundle.metric);
    report.precision_mode = precision_name(bundle.precision);
    report.tie_policy = bundle.policy.name();
    report.leave_one_out = bundle.leave_one_out;
    report.map = mean_average_precision(c);

    const MapBounds bounds = map_bounds(d, r);
    report.map_minus = bounds.map_minus;
    report.map_plus = bounds.map_plus;
    report.epsilon_used = bounds.epsilon_used;

    const ExpectationResult e = expected_map(d, r, config.expectation);
    report.expected_map = e.expected_map;
    report.expected_exact = e.exact;
    report.expectation_samples = e.samples_used;

    std::size_t min_row = d.k_cols;
    for (const auto& row : c.rows) min_row = std::min(min_row, row.size());
    for (std::size_t k : config.precision_ranks)
        if (k >= 1 && k <= min_row)
            report.precision_at_rank.emplace_back(k, sorted_mean(precision_at_k(c, k)));

    report.collisions = collision_counts(d, r, config.collision_threshold);
    report.collisions.metric = report.metric;

    if (config.per_query_ap)
        for (const auto& row : c.rows)
            report.per_query_ap.push_back(average_precision(row));

    report.score_kind = score_name(config.score);
    switch (config.score) {
        case ScoreKind::map: report.score = report.map; break;
        case ScoreKind::map_minus: report.score = report.map_minus; break;
        case ScoreKind::map_plus: report.score = report.map_plus; break;
        case ScoreKind::expected: report.score = report.expected_map; break;
    }
    return report;
}

} // namespace rankeval
