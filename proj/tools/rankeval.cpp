// Command-line surface for the tie-aware embedding retrieval evaluator.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rankeval/adversary.hpp"
#include "rankeval/collision.hpp"
#include "rankeval/io.hpp"
#include "rankeval/report.hpp"
#include "rankeval/tie_bounds.hpp"

namespace {

using namespace rankeval;

struct DataFlags {
    std::string embeddings, labels;
    std::string queries, query_labels, database, db_labels;
    std::string format = "text";
    std::string metric = "euclidean";
    std::string precision = "double";
    std::string tie_policy = "stable";
    bool leave_one_out = false;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
    cmd->add_option("--embeddings", f.embeddings,
                    "single embedding set (use with --leave-one-out)");
    cmd->add_option("--labels", f.labels, "labels for --embeddings, one per line");
    cmd->add_option("--queries", f.queries, "query embeddings");
    cmd->add_option("--query-labels", f.query_labels, "labels for --queries");
    cmd->add_option("--database", f.database, "database embeddings");
    cmd->add_option("--db-labels", f.db_labels, "labels for --database");
    cmd->add_option("--format", f.format, "embedding file format: text|binary")
        ->check(CLI::IsMember({"text", "binary"}));
    cmd->add_option("--metric", f.metric, "euclidean|cosine|cityblock")
        ->check(CLI::IsMember({"euclidean", "cosine", "cityblock"}));
    cmd->add_option("--precision", f.precision, "double|single")
        ->check(CLI::IsMember({"double", "single"}));
    cmd->add_option("--tie-policy", f.tie_policy,
                    "stable|favorable|unfavorable|shuffle:SEED");
    cmd->add_flag("--leave-one-out", f.leave_one_out,
                  "self-classification: each sample queries the rest of the set");
}

DatasetBundle load_bundle(const DataFlags& f) {
    DatasetBundle b;
    b.metric = metric_from_name(f.metric);
    b.precision = precision_from_name(f.precision);
    b.policy = TiePolicy::from_name(f.tie_policy);
    b.leave_one_out = f.leave_one_out;
    const EmbeddingFileFormat fmt = format_from_name(f.format);

    if (!f.embeddings.empty()) {
        if (f.labels.empty())
            throw InputError("--embeddings requires --labels");
        b.queries = load_embeddings(f.embeddings, fmt);
        b.query_labels = load_labels(f.labels);
        b.database = b.queries;
        b.db_labels = b.query_labels;
    } else {
        if (f.queries.empty() || f.database.empty() || f.query_labels.empty() ||
            f.db_labels.empty())
            throw InputError("need --embeddings/--labels or --queries/--query-labels "
                             "plus --database/--db-labels");
        b.queries = load_embeddings(f.queries, fmt);
        b.query_labels = load_labels(f.query_labels);
        b.database = load_embeddings(f.database, fmt);
        b.db_labels = load_labels(f.db_labels);
        if (b.leave_one_out)
            throw InputError("--leave-one-out requires a single --embeddings set");
    }
    return b;
}

void emit(const std::string& content, const std::string& output) {
    if (output.empty())
        std::cout << content;
    else
        write_file_atomic(output, content);
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"Deterministic ranking-metric evaluation for embeddings, with "
                 "tie-robust mAP bounds and collision audits"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "full evaluation report (JSON)");
    DataFlags eval_data;
    add_data_flags(eval, eval_data);
    std::string eval_output, eval_score = "map-minus";
    double eval_threshold = 1e-10;
    std::uint64_t eval_budget = 1'000'000, eval_mc = 100'000, eval_seed = 0;
    bool eval_per_query = false;
    eval->add_option("--output", eval_output, "write report here instead of stdout");
    eval->add_option("--score", eval_score, "map|map-minus|map-plus|expected")
        ->check(CLI::IsMember({"map", "map-minus", "map-plus", "expected"}));
    eval->add_option("--threshold", eval_threshold, "collision audit threshold");
    eval->add_option("--budget", eval_budget, "per-run enumeration budget");
    eval->add_option("--mc-samples", eval_mc, "Monte-Carlo samples past the budget");
    eval->add_option("--seed", eval_seed, "seed for sampled expectations");
    eval->add_flag("--per-query-ap", eval_per_query, "include the per-query AP table");

    // collisions
    auto* col = app.add_subcommand("collisions", "collision report and raster");
    DataFlags col_data;
    add_data_flags(col, col_data);
    std::string col_output, col_raster;
    double col_threshold = 1e-10;
    std::size_t col_drop_rows = 0;
    col->add_option("--threshold", col_threshold, "gap threshold for collisions");
    col->add_option("--output", col_output, "write report here instead of stdout");
    col->add_option("--raster", col_raster, "write a PPM collision map here");
    col->add_option("--drop-rows", col_drop_rows, "skip this many leading queries "
                    "in the raster");

    // runs
    auto* runs_cmd = app.add_subcommand("runs", "dump equidistant runs (JSON)");
    DataFlags runs_data;
    add_data_flags(runs_cmd, runs_data);
    std::string runs_output;
    bool runs_all = false;
    runs_cmd->add_option("--output", runs_output, "write dump here instead of stdout");
    runs_cmd->add_flag("--all", runs_all, "include singleton runs");

    // exploit
    auto* exploit = app.add_subcommand("exploit",
                                       "all-zero-embedding exploit demonstration");
    std::size_t ex_classes = 10, ex_per_class = 100, ex_dim = 1000;
    std::string ex_objective = "maximize", ex_labels, ex_output;
    std::uint64_t ex_budget = 0, ex_seed = 0, ex_mc = 10'000;
    std::size_t ex_baseline_reps = 0;
    exploit->add_option("--classes", ex_classes, "class count for generated labels");
    exploit->add_option("--per-class", ex_per_class, "samples per class");
    exploit->add_option("--dim", ex_dim, "embedding dimensionality");
    exploit->add_option("--labels", ex_labels, "use labels from this file instead");
    exploit->add_option("--objective", ex_objective, "maximize|minimize")
        ->check(CLI::IsMember({"maximize", "minimize"}));
    exploit->add_option("--budget", ex_budget, "order-search evaluations");
    exploit->add_option("--seed", ex_seed, "search / expectation seed");
    exploit->add_option("--expect-samples", ex_mc,
                        "Monte-Carlo samples for the tie expectation");
    exploit->add_option("--baseline-reps", ex_baseline_reps,
                        "random-baseline repetitions to include (0 = skip)");
    exploit->add_option("--output", ex_output, "write report here instead of stdout");

    // baseline
    auto* baseline = app.add_subcommand("baseline", "random-embedding mAP baseline");
    std::size_t bl_classes = 10, bl_per_class = 100, bl_dim = 1000, bl_reps = 30;
    std::uint64_t bl_seed = 0;
    std::string bl_labels, bl_output;
    baseline->add_option("--classes", bl_classes, "class count for generated labels");
    baseline->add_option("--per-class", bl_per_class, "samples per class");
    baseline->add_option("--labels", bl_labels, "use labels from this file instead");
    baseline->add_option("--dim", bl_dim, "embedding dimensionality");
    baseline->add_option("--reps", bl_reps, "repetitions");
    baseline->add_option("--seed", bl_seed, "generator seed");
    baseline->add_option("--output", bl_output, "write summary here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (eval->parsed()) {
        EvaluateConfig cfg;
        cfg.expectation = {eval_budget, eval_mc, eval_seed};
        cfg.collision_threshold = eval_threshold;
        cfg.per_query_ap = eval_per_query;
        cfg.score = score_from_name(eval_score);
        const EvaluationReport report = run_evaluate(load_bundle(eval_data), cfg);
        emit(report.to_json(), eval_output);
    } else if (col->parsed()) {
        DatasetBundle b = load_bundle(col_data);
        const DistanceMatrix d = pairwise_distances(b.queries, b.database, b.metric,
                                                    b.precision);
        std::vector<std::ptrdiff_t> self_map;
        if (b.leave_one_out) {
            self_map.resize(b.queries.rows);
            for (std::size_t i = 0; i < self_map.size(); ++i)
                self_map[i] = static_cast<std::ptrdiff_t>(i);
        }
        const RelevanceMatrix r = relevance(b.query_labels, b.db_labels, self_map);
        const CollisionReport report = collision_counts(d, r, col_threshold);
        std::ostringstream os;
        os << "{\n  \"metric\": \"" << metric_name(b.metric) << "\",\n"
           << "  \"threshold\": " << fmt_real(report.threshold) << ",\n"
           << "  \"total_runs\": " << report.total_runs << ",\n"
           << "  \"mixed_runs\": " << report.mixed_runs << ",\n"
           << "  \"colliding_cells\": " << report.colliding_cells << ",\n"
           << "  \"per_rank_histogram\": [";
        for (std::size_t i = 0; i < report.per_rank_histogram.size(); ++i) {
            if (i) os << ", ";
            os << report.per_rank_histogram[i];
        }
        os << "]\n}\n";
        emit(os.str(), col_output);
        if (!col_raster.empty())
            write_collision_ppm(render_collision_map(d, r, col_threshold), col_raster,
                                col_drop_rows);
    } else if (runs_cmd->parsed()) {
        DatasetBundle b = load_bundle(runs_data);
        const DistanceMatrix d = pairwise_distances(b.queries, b.database, b.metric,
                                                    b.precision);
        std::vector<std::ptrdiff_t> self_map;
        if (b.leave_one_out) {
            self_map.resize(b.queries.rows);
            for (std::size_t i = 0; i < self_map.size(); ++i)
                self_map[i] = static_cast<std::ptrdiff_t>(i);
        }
        const RelevanceMatrix r = relevance(b.query_labels, b.db_labels, self_map);
        const auto all_runs = extract_all_runs(d, r);
        std::ostringstream os;
        os << "[\n";
        bool first = true;
        for (std::size_t q = 0; q < all_runs.size(); ++q) {
            for (const auto& run : all_runs[q]) {
                if (run.length < 2 && !runs_all) continue;
                if (!first) os << ",\n";
                first = false;
                os << "  {\"query\": " << q << ", \"distance\": "
                   << fmt_real(run.distance)
                   << ", \"retrieved_before\": " << run.retrieved_before
                   << ", \"relevant_before\": " << run.relevant_before
                   << ", \"length\": " << run.length
                   << ", \"relevant\": " << run.relevant_count
                   << ", \"mixed\": " << (run.mixed() ? "true" : "false") << "}";
            }
        }
        os << "\n]\n";
        emit(os.str(), runs_output);
    } else if (exploit->parsed()) {
        ExploitInstance instance;
        if (!ex_labels.empty()) {
            instance.labels = load_labels(ex_labels);
            instance.dim = ex_dim;
            instance.sample_order.resize(instance.labels.size());
            for (std::size_t i = 0; i < instance.sample_order.size(); ++i)
                instance.sample_order[i] = i;
        } else {
            instance = ExploitInstance::uniform_classes(ex_classes, ex_per_class, ex_dim);
        }
        const OrderObjective objective = ex_objective == "maximize"
                                             ? OrderObjective::maximize
                                             : OrderObjective::minimize;
        const OrderSearchResult searched =
            search_order(instance.labels, objective, ex_budget, ex_seed);
        instance.sample_order = searched.order;
        const ExpectationConfig expectation{1'000'000, ex_mc, ex_seed};
        const ExploitReport report =
            exploit_report(instance, expectation, ex_baseline_reps, ex_seed);
        std::ostringstream os;
        os << "{\n  \"objective\": \"" << ex_objective << "\",\n"
           << "  \"search_evaluations\": " << searched.evaluations << ",\n"
           << "  \"measured_map\": " << fmt_real(report.measured_map) << ",\n"
           << "  \"map_minus\": " << fmt_real(report.map_minus) << ",\n"
           << "  \"map_plus\": " << fmt_real(report.map_plus) << ",\n"
           << "  \"expected_map\": " << fmt_real(report.expected_map) << ",\n"
           << "  \"expected_exact\": " << (report.expected_exact ? "true" : "false")
           << ",\n"
           << "  \"epsilon_used\": " << fmt_real(report.epsilon_used);
        if (report.baseline_repetitions > 0) {
            os << ",\n  \"baseline_mean\": " << fmt_real(report.baseline_mean)
               << ",\n  \"baseline_std\": " << fmt_real(report.baseline_std)
               << ",\n  \"baseline_reps\": " << report.baseline_repetitions;
        }
        os << "\n}\n";
        emit(os.str(), ex_output);
    } else if (baseline->parsed()) {
        LabelVector labels;
        if (!bl_labels.empty()) {
            labels = load_labels(bl_labels);
        } else {
            labels = ExploitInstance::uniform_classes(bl_classes, bl_per_class, 1).labels;
        }
        const BaselineSummary summary = random_baseline(labels, bl_dim, bl_reps, bl_seed);
        std::ostringstream os;
        os << "{\n  \"repetitions\": " << summary.repetitions << ",\n"
           << "  \"dim\": " << bl_dim << ",\n"
           << "  \"seed\": " << summary.seed << ",\n"
           << "  \"mean_map\": " << fmt_real(summary.mean_map) << ",\n"
           << "  \"std_map\": " << fmt_real(summary.std_map) << "\n}\n";
        emit(os.str(), bl_output);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rankeval::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
