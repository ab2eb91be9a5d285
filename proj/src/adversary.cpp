#include "rankeval/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "rankeval/distances.hpp"
#include "rankeval/rng.hpp"
#include "rankeval/tie_bounds.hpp"

namespace rankeval {

namespace {

std::vector<std::ptrdiff_t> identity_self_map(std::size_t n) {
    std::vector<std::ptrdiff_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::ptrdiff_t>(i);
    return m;
}

LabelVector apply_order(const LabelVector& labels, const std::vector<std::size_t>& order) {
    LabelVector out(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) out[i] = labels[order[i]];
    return out;
}

/// Class indices in first-appearance order, plus per-class member lists.
std::vector<std::vector<std::size_t>> class_members(const LabelVector& labels) {
    std::unordered_map<Label, std::size_t> ids;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], members.size());
        if (inserted) members.emplace_back();
        members[it->second].push_back(i);
    }
    return members;
}

double leave_one_out_map(const EmbeddingMatrix& embeddings, const LabelVector& labels,
                         TiePolicy policy) {
    const DistanceMatrix d =
        pairwise_distances(embeddings, embeddings, DistanceMetricKind::euclidean,
                           PrecisionMode::full_double);
    const RelevanceMatrix r = relevance(labels, labels, identity_self_map(labels.size()));
    return mean_average_precision(rank_correct(d, r, policy));
}

} // namespace

ExploitInstance ExploitInstance::uniform_classes(std::size_t classes,
                                                 std::size_t per_class,
                                                 std::size_t dim) {
    if (classes == 0 || per_class < 2 || dim == 0)
        throw InputError("exploit instance needs classes >= 1, per_class >= 2, dim >= 1");
    ExploitInstance inst;
    inst.dim = dim;
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < per_class; ++i)
            inst.labels.push_back("c" + std::to_string(c));
    inst.sample_order.resize(inst.labels.size());
    for (std::size_t i = 0; i < inst.sample_order.size(); ++i) inst.sample_order[i] = i;
    return inst;
}

void ExploitInstance::validate() const {
    if (labels.empty() || dim == 0)
        throw InputError("exploit instance is empty");
    if (sample_order.size() != labels.size())
        throw InputError("sample order length does not match label count");
    std::vector<std::uint8_t> seen(labels.size(), 0);
    for (std::size_t i : sample_order) {
        if (i >= labels.size() || seen[i])
            throw InputError("sample order is not a permutation");
        seen[i] = 1;
    }
    for (const auto& cls : class_members(labels))
        if (cls.size() < 2)
            throw InputError("singleton class in exploit instance: " + labels[cls[0]]);
}

double evaluate_with_order(const ExploitInstance& instance, TiePolicy policy) {
    instance.validate();
    const LabelVector ordered = apply_order(instance.labels, instance.sample_order);
    const EmbeddingMatrix zeros =
        EmbeddingMatrix::zeros(instance.labels.size(), instance.dim);
    return leave_one_out_map(zeros, ordered, policy);
}

std::vector<std::size_t> favorable_order(const LabelVector& labels) {
    std::vector<std::size_t> order;
    order.reserve(labels.size());
    for (const auto& cls : class_members(labels))
        order.insert(order.end(), cls.begin(), cls.end());
    return order;
}

std::vector<std::size_t> unfavorable_order(const LabelVector& labels) {
    const auto members = class_members(labels);
    std::vector<std::size_t> order;
    order.reserve(labels.size());
    for (std::size_t round = 0; order.size() < labels.size(); ++round)
        for (const auto& cls : members)
            if (round < cls.size()) order.push_back(cls[round]);
    return order;
}

namespace detail {

double fully_tied_map(const LabelVector& ordered_labels) {
    const std::size_t n = ordered_labels.size();
    std::unordered_map<Label, std::size_t> counts;
    for (const auto& l : ordered_labels) ++counts[l];
    std::vector<std::size_t> cls(n);
    {
        std::unordered_map<Label, std::size_t> ids;
        for (std::size_t i = 0; i < n; ++i)
            cls[i] = ids.try_emplace(ordered_labels[i], ids.size()).first->second;
    }

    std::vector<double> aps;
    aps.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t total = counts[ordered_labels[q]] - 1;
        if (total == 0)
            throw InputError("singleton query " + std::to_string(q));
        std::size_t retrieved = 0, prefix = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == q) continue;
            ++retrieved;
            if (cls[i] == cls[q]) {
                ++prefix;
                sum += static_cast<double>(prefix) / static_cast<double>(retrieved);
            }
        }
        aps.push_back(sum / static_cast<double>(total));
    }
    return sorted_mean(std::move(aps));
}

} // namespace detail

OrderSearchResult search_order(const LabelVector& labels, OrderObjective objective,
                               std::uint64_t budget, std::uint64_t seed) {
    OrderSearchResult result;
    result.order = objective == OrderObjective::maximize ? favorable_order(labels)
                                                         : unfavorable_order(labels);
    LabelVector ordered = apply_order(labels, result.order);
    result.measured_map = detail::fully_tied_map(ordered);

    std::mt19937_64 rng(mix_seed(seed, labels.size()));
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    const bool maximize = objective == OrderObjective::maximize;
    for (std::uint64_t it = 0; it < budget; ++it) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) {
            ++result.evaluations;
            continue;
        }
        std::swap(result.order[a], result.order[b]);
        std::swap(ordered[a], ordered[b]);
        const double candidate = detail::fully_tied_map(ordered);
        ++result.evaluations;
        if (maximize ? candidate > result.measured_map
                     : candidate < result.measured_map) {
            result.measured_map = candidate;
        } else {
            std::swap(result.order[a], result.order[b]);
            std::swap(ordered[a], ordered[b]);
        }
    }
    return result;
}

BaselineSummary random_baseline(const LabelVector& labels, std::size_t dim,
                                std::size_t repetitions, std::uint64_t seed) {
    if (repetitions < 1)
        throw InputError("baseline needs at least one repetition");
    std::vector<double> maps;
    maps.reserve(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        std::mt19937_64 rng(mix_seed(seed, rep, 0x5eedbeef));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        EmbeddingMatrix e(labels.size(), dim);
        for (double& v : e.values) v = uniform(rng);
        maps.push_back(leave_one_out_map(e, labels, TiePolicy::stable()));
    }
    BaselineSummary out;
    out.repetitions = repetitions;
    out.seed = seed;
    out.mean_map = sorted_mean(maps);
    if (repetitions > 1) {
        double ss = 0.0;
        for (double v : maps) ss += (v - out.mean_map) * (v - out.mean_map);
        out.std_map = std::sqrt(ss / static_cast<double>(repetitions - 1));
    }
    return out;
}

ExploitReport exploit_report(const ExploitInstance& instance,
                             const ExpectationConfig& expectation,
                             std::size_t baseline_repetitions,
                             std::uint64_t baseline_seed) {
    instance.validate();
    const LabelVector ordered = apply_order(instance.labels, instance.sample_order);
    const EmbeddingMatrix zeros =
        EmbeddingMatrix::zeros(instance.labels.size(), instance.dim);
    const DistanceMatrix d =
        pairwise_distances(zeros, zeros, DistanceMetricKind::euclidean,
                           PrecisionMode::full_double);
    const RelevanceMatrix r = relevance(ordered, ordered, identity_self_map(ordered.size()));

    ExploitReport report;
    report.measured_map = mean_average_precision(rank_correct(d, r, TiePolicy::stable()));
    const MapBounds bounds = map_bounds(d, r);
    report.map_minus = bounds.map_minus;
    report.map_plus = bounds.map_plus;
    report.epsilon_used = bounds.epsilon_used;
    const ExpectationResult e = expected_map(d, r, expectation);
    report.expected_map = e.expected_map;
    report.expected_exact = e.exact;
    report.expectation_samples = e.samples_used;
    if (baseline_repetitions > 0) {
        const BaselineSummary b =
            random_baseline(instance.labels, instance.dim, baseline_repetitions,
                            baseline_seed);
        report.baseline_mean = b.mean_map;
        report.baseline_std = b.std_map;
        report.baseline_repetitions = b.repetitions;
    }
    return report;
}

} // namespace rankeval
