#include "rankeval/tie_expectation.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "rankeval/rng.hpp"

namespace rankeval {

namespace {

/// C(n, k) capped: returns cap + 1 as soon as the count exceeds cap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (c > cap) return cap + 1;
        // c * (n - k + i) is exactly divisible by i at this point.
        if (c > std::numeric_limits<std::uint64_t>::max() / (n - k + i)) return cap + 1;
        c = c * (n - k + i) / i;
    }
    return c;
}

double placement_contribution(const EquidistantRun& run,
                              std::span<const std::size_t> positions) {
    // positions: ascending 1-based slots of the relevant samples within the run.
    const double n = static_cast<double>(run.relevant_before);
    const double k = static_cast<double>(run.retrieved_before);
    double sum = 0.0;
    for (std::size_t j = 0; j < positions.size(); ++j)
        sum += (n + static_cast<double>(j + 1)) / (k + static_cast<double>(positions[j]));
    return sum;
}

} // namespace

std::vector<EquidistantRun> extract_runs(std::span<const double> d_row,
                                         std::span<const std::uint8_t> rel_row,
                                         std::span<const std::uint8_t> excluded_row,
                                         std::size_t query_index) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < d_row.size(); ++k)
        if (excluded_row.empty() || !excluded_row[k]) idx.push_back(k);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (d_row[a] != d_row[b]) return d_row[a] < d_row[b];
        return a < b;
    });

    std::vector<EquidistantRun> runs;
    std::size_t retrieved = 0, relevant = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        std::size_t m = 0;
        while (j < idx.size() && d_row[idx[j]] == d_row[idx[i]]) {
            if (rel_row[idx[j]]) ++m;
            ++j;
        }
        EquidistantRun run;
        run.query_index = query_index;
        run.retrieved_before = retrieved;
        run.relevant_before = relevant;
        run.length = j - i;
        run.relevant_count = m;
        run.distance = d_row[idx[i]];
        runs.push_back(run);
        retrieved += run.length;
        relevant += m;
        i = j;
    }
    return runs;
}

std::vector<std::vector<EquidistantRun>> extract_all_runs(const DistanceMatrix& d,
                                                          const RelevanceMatrix& r) {
    if (d.q_rows != r.q_rows || d.k_cols != r.k_cols)
        throw InputError("distance and relevance matrices have different shapes");
    std::vector<std::vector<EquidistantRun>> out(d.q_rows);
    for (std::size_t q = 0; q < d.q_rows; ++q) {
        out[q] = extract_runs(d.row(q),
                              {r.rel.data() + q * r.k_cols, r.k_cols},
                              {r.excluded.data() + q * r.k_cols, r.k_cols}, q);
    }
    return out;
}

RunExpectation run_expected_contribution(const EquidistantRun& run,
                                         std::uint64_t enumeration_budget,
                                         std::uint64_t mc_samples,
                                         std::uint64_t seed) {
    const std::size_t l = run.length;
    const std::size_t m = run.relevant_count;
    if (m == 0) return {0.0, true, 0};

    std::vector<std::size_t> pos(m);
    if (m == l) {
        for (std::size_t j = 0; j < m; ++j) pos[j] = j + 1;
        return {placement_contribution(run, pos), true, 0};
    }

    const std::uint64_t combos = binomial_capped(l, m, enumeration_budget);
    if (combos <= enumeration_budget) {
        for (std::size_t j = 0; j < m; ++j) pos[j] = j + 1;
        double sum = 0.0;
        while (true) {
            sum += placement_contribution(run, pos);
            // next lexicographic combination of {1..l}
            std::size_t j = m;
            while (j > 0 && pos[j - 1] == l - (m - j)) --j;
            if (j == 0) break;
            ++pos[j - 1];
            for (std::size_t t = j; t < m; ++t) pos[t] = pos[t - 1] + 1;
        }
        return {sum / static_cast<double>(combos), true, 0};
    }

    // Monte-Carlo over placements; generation-stamped slots avoid re-init.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(1, l);
    std::vector<std::uint64_t> stamp(l + 1, 0);
    std::uint64_t gen = 0;
    double sum = 0.0;
    for (std::uint64_t s = 0; s < mc_samples; ++s) {
        ++gen;
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t p;
            do {
                p = pick(rng);
            } while (stamp[p] == gen);
            stamp[p] = gen;
            pos[j] = p;
        }
        std::sort(pos.begin(), pos.end());
        sum += placement_contribution(run, pos);
    }
    return {sum / static_cast<double>(mc_samples), false, mc_samples};
}

ExpectationResult expected_map(const DistanceMatrix& d, const RelevanceMatrix& r,
                               const ExpectationConfig& config) {
    const auto all_runs = extract_all_runs(d, r);
    ExpectationResult out;
    std::vector<double> expected_aps;
    expected_aps.reserve(d.q_rows);
    for (std::size_t q = 0; q < d.q_rows; ++q) {
        const std::size_t total_relevant = r.row_relevant_count(q);
        if (total_relevant == 0)
            throw InputError("query " + std::to_string(q) + " has no relevant samples");
        double sum = 0.0;
        for (std::size_t ordinal = 0; ordinal < all_runs[q].size(); ++ordinal) {
            const auto contribution = run_expected_contribution(
                all_runs[q][ordinal], config.enumeration_budget, config.mc_samples,
                mix_seed(config.seed, q, ordinal));
            sum += contribution.value;
            out.exact = out.exact && contribution.exact;
            out.samples_used += contribution.samples_used;
        }
        expected_aps.push_back(sum / static_cast<double>(total_relevant));
    }
    out.expected_map = sorted_mean(std::move(expected_aps));
    return out;
}

} // namespace rankeval
