#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "rankeval/tie_bounds.hpp"
#include "rankeval/tie_expectation.hpp"

using namespace rankeval;

namespace {

DistanceMatrix dmatrix(const std::vector<std::vector<double>>& rows) {
    DistanceMatrix d(rows.size(), rows[0].size());
    for (std::size_t q = 0; q < rows.size(); ++q)
        for (std::size_t k = 0; k < rows[q].size(); ++k) d.at(q, k) = rows[q][k];
    return d;
}

RelevanceMatrix rmatrix(const std::vector<std::vector<int>>& rows) {
    RelevanceMatrix r(rows.size(), rows[0].size());
    for (std::size_t q = 0; q < rows.size(); ++q)
        for (std::size_t k = 0; k < rows[q].size(); ++k)
            r.rel[q * r.k_cols + k] = rows[q][k] ? 1 : 0;
    return r;
}

std::pair<DistanceMatrix, RelevanceMatrix> random_tied_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t q_rows = 1 + rng() % 10;
    const std::size_t k_cols = 2 + rng() % 12;
    DistanceMatrix d(q_rows, k_cols);
    RelevanceMatrix r(q_rows, k_cols);
    std::uniform_int_distribution<int> quantized(0, 5);
    for (std::size_t q = 0; q < q_rows; ++q) {
        bool any = false;
        for (std::size_t k = 0; k < k_cols; ++k) {
            d.at(q, k) = quantized(rng) / 10.0;
            const bool rel = rng() % 3 == 0;
            r.rel[q * k_cols + k] = rel;
            any = any || rel;
        }
        if (!any) r.rel[q * k_cols + rng() % k_cols] = 1;
    }
    return {std::move(d), std::move(r)};
}

/// The Fig-style single query: two relevant among many, first tie group at the
/// top (length 2, one relevant), second at ranks 5-7 (one relevant).
std::pair<DistanceMatrix, RelevanceMatrix> worked_example(std::size_t k_cols = 100) {
    DistanceMatrix d(1, k_cols);
    RelevanceMatrix r(1, k_cols);
    d.at(0, 0) = 0.1;
    d.at(0, 1) = 0.1;
    d.at(0, 2) = 0.2;
    d.at(0, 3) = 0.3;
    d.at(0, 4) = 0.4;
    d.at(0, 5) = 0.4;
    d.at(0, 6) = 0.4;
    for (std::size_t k = 7; k < k_cols; ++k)
        d.at(0, k) = 0.5 + 0.01 * static_cast<double>(k);
    r.rel[0] = 1;
    r.rel[5] = 1;
    return {std::move(d), std::move(r)};
}

} // namespace

TEST_CASE("epsilon_select hand values") {
    CHECK(epsilon_select(dmatrix({{0.1, 0.2, 0.2, 0.5}})) == 0.05);
    CHECK(epsilon_select(dmatrix({{0.0, 0.0, 0.0}})) == 1.0);
    CHECK(epsilon_select(dmatrix({{0.1, 0.4}, {0.35, 0.36}})) ==
          doctest::Approx(0.005).epsilon(1e-12));
}

TEST_CASE("perturbation matrix construction") {
    const auto r = rmatrix({{1, 0, 1}});
    const auto e = perturbation(r, 0.5);
    CHECK(e.at(0, 0) == 0.0);
    CHECK(e.at(0, 1) == 0.5);
    CHECK(e.at(0, 2) == 0.0);
    const auto all_rel = perturbation(rmatrix({{1, 1}}), 0.25);
    CHECK(all_rel.at(0, 0) == 0.0);
    CHECK(all_rel.at(0, 1) == 0.0);
    CHECK_THROWS_AS(perturbation(r, 0.0), InputError);
    CHECK_THROWS_AS(perturbation(r, -1.0), InputError);
}

TEST_CASE("bounds collapse to mAP when rows are tie-free") {
    const auto d = dmatrix({{0.1, 0.3, 0.2, 0.4}, {0.4, 0.1, 0.2, 0.3}});
    const auto r = rmatrix({{1, 0, 1, 0}, {0, 1, 0, 1}});
    const auto b = map_bounds(d, r);
    const double map = mean_average_precision(rank_correct(d, r, TiePolicy::stable()));
    CHECK(b.map_minus == map);
    CHECK(b.map_plus == map);
}

TEST_CASE("worked two-tie-group example bounds") {
    const auto [d, r] = worked_example();
    const auto b = map_bounds(d, r);
    CHECK(b.map_plus == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(b.map_minus == doctest::Approx((0.5 + 2.0 / 7.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("small all-zero instance matches the closed form") {
    // 3 classes x 3 samples, leave-one-out over all-zero distances.
    const std::size_t classes = 3, per = 3, n = classes * per;
    DistanceMatrix d(n, n);
    RelevanceMatrix r(n, n);
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t k = 0; k < n; ++k) {
            r.rel[q * n + k] = (q / per) == (k / per);
            if (q == k) r.excluded[q * n + k] = 1;
        }
    const auto b = map_bounds(d, r);
    CHECK(b.map_plus == 1.0);
    double closed = 0.0; // (1/(per-1)) * sum_i i/(irrelevant + i)
    for (std::size_t i = 1; i < per; ++i)
        closed += static_cast<double>(i) / static_cast<double>(n - per + i);
    closed /= static_cast<double>(per - 1);
    CHECK(b.map_minus == doctest::Approx(closed).epsilon(1e-14));
    CHECK(b.epsilon_used == 1.0);
}

TEST_CASE("epsilon override validation") {
    const auto d = dmatrix({{0.1, 0.2, 0.2}});
    const auto r = rmatrix({{1, 0, 1}});
    CHECK_NOTHROW(map_bounds(d, r, 0.01));
    CHECK_THROWS_AS(map_bounds(d, r, 0.1), InputError);  // equals the min gap
    CHECK_THROWS_AS(map_bounds(d, r, 0.5), InputError);  // above it
    CHECK_THROWS_AS(map_bounds(d, r, -0.1), InputError);
}

TEST_CASE("bounds equal the favorable/unfavorable tie policies") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto [d, r] = random_tied_instance(seed);
        const auto b = map_bounds(d, r);
        const double fav =
            mean_average_precision(rank_correct(d, r, TiePolicy::favorable()));
        const double unf =
            mean_average_precision(rank_correct(d, r, TiePolicy::unfavorable()));
        CHECK(b.map_plus == fav);
        CHECK(b.map_minus == unf);
    }
}

TEST_CASE("sandwich: every tie resolution lands inside the bounds") {
    for (std::uint64_t seed = 50; seed < 100; ++seed) {
        const auto [d, r] = random_tied_instance(seed);
        const auto b = map_bounds(d, r);
        CHECK(b.map_minus <= b.map_plus);
        for (std::uint64_t s = 0; s < 5; ++s) {
            const double map =
                mean_average_precision(rank_correct(d, r, TiePolicy::shuffle(s)));
            CHECK(b.map_minus <= map);
            CHECK(map <= b.map_plus);
        }
    }
}

TEST_CASE("perturbation preserves the order of non-tied pairs") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto [d, r] = random_tied_instance(seed);
        const double eps = epsilon_select(d);
        const auto e = perturbation(r, eps);
        for (std::size_t q = 0; q < d.q_rows; ++q)
            for (std::size_t a = 0; a < d.k_cols; ++a)
                for (std::size_t b2 = 0; b2 < d.k_cols; ++b2) {
                    if (d.at(q, a) < d.at(q, b2)) {
                        CHECK(d.at(q, a) + e.at(q, a) < d.at(q, b2) + e.at(q, b2));
                        CHECK(d.at(q, a) - e.at(q, a) < d.at(q, b2) - e.at(q, b2));
                    }
                }
    }
}

TEST_CASE("bounds differ exactly when a mixed tie group exists") {
    for (std::uint64_t seed = 120; seed < 160; ++seed) {
        const auto [d, r] = random_tied_instance(seed);
        const auto b = map_bounds(d, r);
        bool has_mixed = false;
        for (const auto& runs : extract_all_runs(d, r))
            for (const auto& run : runs) has_mixed = has_mixed || run.mixed();
        if (has_mixed)
            CHECK(b.map_minus < b.map_plus);
        else
            CHECK(b.map_minus == b.map_plus);
    }
}

TEST_CASE("bounds are invariant under database permutation") {
    for (std::uint64_t seed = 160; seed < 180; ++seed) {
        const auto [d, r] = random_tied_instance(seed);
        const auto base = map_bounds(d, r);

        std::vector<std::size_t> perm(d.k_cols);
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::mt19937_64 rng(seed + 1);
        std::shuffle(perm.begin(), perm.end(), rng);

        DistanceMatrix pd(d.q_rows, d.k_cols);
        RelevanceMatrix pr(d.q_rows, d.k_cols);
        for (std::size_t q = 0; q < d.q_rows; ++q)
            for (std::size_t k = 0; k < d.k_cols; ++k) {
                pd.at(q, k) = d.at(q, perm[k]);
                pr.rel[q * d.k_cols + k] = r.rel[q * d.k_cols + perm[k]];
            }
        const auto permuted = map_bounds(pd, pr);
        CHECK(base.map_minus == permuted.map_minus);
        CHECK(base.map_plus == permuted.map_plus);
    }
}
