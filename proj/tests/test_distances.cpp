#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rankeval/distances.hpp"

using namespace rankeval;

namespace {

EmbeddingMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    EmbeddingMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    return m;
}

EmbeddingMatrix random_matrix(std::size_t rows, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EmbeddingMatrix m(rows, dim);
    for (double& v : m.values) v = u(rng);
    return m;
}

} // namespace

TEST_CASE("euclidean 3-4-5 triangle") {
    const auto q = from_rows({{0.0, 0.0}});
    const auto db = from_rows({{3.0, 4.0}});
    const auto d = pairwise_distances(q, db, DistanceMetricKind::euclidean,
                                      PrecisionMode::full_double);
    CHECK(d.at(0, 0) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("cityblock hand example") {
    const auto q = from_rows({{1.0, 2.0}});
    const auto db = from_rows({{3.0, 1.0}});
    const auto d = pairwise_distances(q, db, DistanceMetricKind::cityblock,
                                      PrecisionMode::full_double);
    CHECK(d.at(0, 0) == 3.0);
}

TEST_CASE("cosine identity and zero-vector conventions") {
    const auto q = from_rows({{1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}});
    const auto db = from_rows({{1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}});
    const auto d = pairwise_distances(q, db, DistanceMetricKind::cosine,
                                      PrecisionMode::full_double);
    CHECK(d.at(0, 0) == 0.0); // identical nonzero vectors
    CHECK(d.at(1, 1) == 0.0); // zero vs zero
    CHECK(d.at(1, 0) == 1.0); // zero vs nonzero
    CHECK(d.at(0, 1) == 1.0);
}

TEST_CASE("all-zero embeddings are fully tied under every metric") {
    const auto z = EmbeddingMatrix::zeros(4, 7);
    for (auto metric : {DistanceMetricKind::euclidean, DistanceMetricKind::cosine,
                        DistanceMetricKind::cityblock}) {
        const auto d = pairwise_distances(z, z, metric, PrecisionMode::full_double);
        for (double v : d.values) CHECK(v == 0.0);
    }
}

TEST_CASE("dimension mismatch and non-finite inputs are rejected") {
    const auto a = from_rows({{1.0, 2.0}});
    const auto b = from_rows({{1.0, 2.0, 3.0}});
    CHECK_THROWS_AS(pairwise_distances(a, b, DistanceMetricKind::euclidean,
                                       PrecisionMode::full_double),
                    InputError);
    auto bad = from_rows({{1.0, std::nan("")}});
    CHECK_THROWS_AS(pairwise_distances(bad, bad, DistanceMetricKind::euclidean,
                                       PrecisionMode::full_double),
                    InputError);
}

TEST_CASE("self-comparison is bit-exactly symmetric with zero diagonal") {
    const auto e = random_matrix(12, 9, 41);
    for (auto metric : {DistanceMetricKind::euclidean, DistanceMetricKind::cosine,
                        DistanceMetricKind::cityblock}) {
        for (auto mode : {PrecisionMode::full_double, PrecisionMode::emulated_single}) {
            const auto d = pairwise_distances(e, e, metric, mode);
            for (std::size_t i = 0; i < d.q_rows; ++i) {
                CHECK(d.at(i, i) == 0.0);
                for (std::size_t j = 0; j < d.k_cols; ++j)
                    CHECK(d.at(i, j) == d.at(j, i));
            }
            // full pairwise call must agree with the mirrored self path
            EmbeddingMatrix copy = e;
            const auto full = pairwise_distances(e, copy, metric, mode);
            CHECK(full.values == d.values);
        }
    }
}

TEST_CASE("triangle inequality on random triples") {
    const auto e = random_matrix(30, 6, 99);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, e.rows - 1);
    for (auto metric : {DistanceMetricKind::euclidean, DistanceMetricKind::cityblock}) {
        const auto d = pairwise_distances(e, e, metric, PrecisionMode::full_double);
        for (int t = 0; t < 200; ++t) {
            const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
            CHECK(d.at(a, c) <= d.at(a, b) + d.at(b, c) + 1e-12);
        }
    }
}

TEST_CASE("cosine distance is invariant under positive row scaling") {
    const auto e = random_matrix(10, 8, 5);
    const auto base = pairwise_distances(e, e, DistanceMetricKind::cosine,
                                         PrecisionMode::full_double);
    EmbeddingMatrix scaled = e;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> s(0.1, 50.0);
    for (std::size_t r = 0; r < scaled.rows; ++r) {
        const double f = s(rng);
        for (std::size_t c = 0; c < scaled.dim; ++c) scaled.at(r, c) *= f;
    }
    const auto after = pairwise_distances(scaled, scaled, DistanceMetricKind::cosine,
                                          PrecisionMode::full_double);
    for (std::size_t i = 0; i < base.values.size(); ++i)
        CHECK(std::fabs(base.values[i] - after.values[i]) <= 1e-12);
}

TEST_CASE("emulated single never has more distinct values per row than double") {
    const auto e = random_matrix(15, 5, 1234);
    for (auto metric : {DistanceMetricKind::euclidean, DistanceMetricKind::cosine,
                        DistanceMetricKind::cityblock}) {
        const auto d64 = pairwise_distances(e, e, metric, PrecisionMode::full_double);
        const auto d32 = pairwise_distances(e, e, metric, PrecisionMode::emulated_single);
        for (std::size_t q = 0; q < d64.q_rows; ++q) {
            const auto r64 = d64.row(q);
            const auto r32 = d32.row(q);
            std::set<double> s64(r64.begin(), r64.end());
            std::set<double> s32(r32.begin(), r32.end());
            CHECK(s32.size() <= s64.size());
        }
    }
}

TEST_CASE("cosine values stay within [0, 2]") {
    const auto e = random_matrix(20, 4, 3);
    const auto d = pairwise_distances(e, e, DistanceMetricKind::cosine,
                                      PrecisionMode::full_double);
    for (double v : d.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 2.0);
    }
}
