#include "rankeval/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "rankeval/rng.hpp"

namespace rankeval {

std::string TiePolicy::name() const {
    switch (kind) {
        case Kind::stable_by_index: return "stable";
        case Kind::favorable: return "favorable";
        case Kind::unfavorable: return "unfavorable";
        case Kind::seeded_shuffle: return "shuffle:" + std::to_string(seed);
    }
    return "?";
}

TiePolicy TiePolicy::from_name(const std::string& name) {
    if (name == "stable") return stable();
    if (name == "favorable") return favorable();
    if (name == "unfavorable") return unfavorable();
    if (name.rfind("shuffle:", 0) == 0) {
        try {
            return shuffle(std::stoull(name.substr(8)));
        } catch (const std::exception&) {
            throw InputError("bad shuffle seed in tie policy: " + name);
        }
    }
    throw InputError("unknown tie policy: " + name);
}

RelevanceMatrix relevance(const LabelVector& query_labels,
                          const LabelVector& db_labels,
                          const std::vector<std::ptrdiff_t>& self_map) {
    if (query_labels.empty() || db_labels.empty())
        throw InputError("label vectors must be non-empty");
    const std::size_t q_rows = query_labels.size();
    const std::size_t k_cols = db_labels.size();
    RelevanceMatrix r(q_rows, k_cols);

    if (!self_map.empty()) {
        if (self_map.size() != q_rows)
            throw InputError("self map must have one entry per query");
        for (std::size_t q = 0; q < q_rows; ++q) {
            const std::ptrdiff_t k = self_map[q];
            if (k < 0) continue;
            if (static_cast<std::size_t>(k) >= k_cols)
                throw InputError("self map index out of range for query " + std::to_string(q));
            r.excluded[q * k_cols + static_cast<std::size_t>(k)] = 1;
        }
    }

    for (std::size_t q = 0; q < q_rows; ++q)
        for (std::size_t k = 0; k < k_cols; ++k)
            r.rel[q * k_cols + k] = query_labels[q] == db_labels[k] ? 1 : 0;

    std::string singletons;
    for (std::size_t q = 0; q < q_rows; ++q) {
        if (r.row_relevant_count(q) == 0) {
            if (!singletons.empty()) singletons += ", ";
            singletons += std::to_string(q);
        }
    }
    if (!singletons.empty())
        throw InputError("singleton queries with no relevant database sample "
                         "after exclusion: " + singletons);
    return r;
}

CorrectMatrix rank_correct(const DistanceMatrix& d, const RelevanceMatrix& r,
                           TiePolicy policy) {
    if (d.q_rows != r.q_rows || d.k_cols != r.k_cols)
        throw InputError("distance and relevance matrices have different shapes");

    CorrectMatrix c;
    c.rows.resize(d.q_rows);
    c.order.resize(d.q_rows);

    std::vector<std::size_t> idx;
    std::vector<std::uint64_t> priority;
    for (std::size_t q = 0; q < d.q_rows; ++q) {
        idx.clear();
        for (std::size_t k = 0; k < d.k_cols; ++k)
            if (!r.is_excluded(q, k)) idx.push_back(k);

        if (policy.kind == TiePolicy::Kind::seeded_shuffle) {
            priority.assign(d.k_cols, 0);
            std::mt19937_64 rng(mix_seed(policy.seed, q));
            for (std::size_t k : idx) priority[k] = rng();
        }

        const auto row = d.row(q);
        auto tie_key = [&](std::size_t k) -> std::uint64_t {
            switch (policy.kind) {
                case TiePolicy::Kind::stable_by_index: return 0;
                case TiePolicy::Kind::favorable: return r.relevant(q, k) ? 0 : 1;
                case TiePolicy::Kind::unfavorable: return r.relevant(q, k) ? 1 : 0;
                case TiePolicy::Kind::seeded_shuffle: return priority[k];
            }
            return 0;
        };
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (row[a] != row[b]) return row[a] < row[b];
            const std::uint64_t ka = tie_key(a), kb = tie_key(b);
            if (ka != kb) return ka < kb;
            return a < b;
        });

        c.order[q] = idx;
        c.rows[q].resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            c.rows[q][i] = r.relevant(q, idx[i]) ? 1 : 0;
    }
    return c;
}

PrecisionRecallMatrices precision_recall(const CorrectMatrix& c) {
    PrecisionRecallMatrices out;
    out.precision.resize(c.q_rows());
    out.recall.resize(c.q_rows());
    for (std::size_t q = 0; q < c.q_rows(); ++q) {
        const auto& row = c.rows[q];
        const std::size_t total =
            static_cast<std::size_t>(std::count(row.begin(), row.end(), 1));
        if (total == 0)
            throw InputError("query " + std::to_string(q) + " has no relevant samples");
        out.precision[q].resize(row.size());
        out.recall[q].resize(row.size());
        std::size_t prefix = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            prefix += row[k];
            out.precision[q][k] = static_cast<double>(prefix) / static_cast<double>(k + 1);
            out.recall[q][k] = static_cast<double>(prefix) / static_cast<double>(total);
        }
    }
    return out;
}

double average_precision(std::span<const std::uint8_t> c_row) {
    std::size_t prefix = 0;
    std::size_t total = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < c_row.size(); ++k) {
        if (c_row[k]) {
            ++prefix;
            ++total;
            sum += static_cast<double>(prefix) / static_cast<double>(k + 1);
        }
    }
    if (total == 0)
        throw InputError("average precision of a row with no relevant samples");
    return sum / static_cast<double>(total);
}

double sorted_mean(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double mean_average_precision(const CorrectMatrix& c) {
    std::vector<double> aps;
    aps.reserve(c.q_rows());
    for (std::size_t q = 0; q < c.q_rows(); ++q)
        aps.push_back(average_precision(c.rows[q]));
    return sorted_mean(std::move(aps));
}

std::vector<double> precision_at_k(const CorrectMatrix& c, std::size_t k) {
    std::vector<double> out;
    out.reserve(c.q_rows());
    for (std::size_t q = 0; q < c.q_rows(); ++q) {
        const auto& row = c.rows[q];
        if (k < 1 || k > row.size())
            throw InputError("rank " + std::to_string(k) + " out of range for query " +
                             std::to_string(q) + " (row length " +
                             std::to_string(row.size()) + ")");
        std::size_t prefix = 0;
        for (std::size_t i = 0; i < k; ++i) prefix += row[i];
        out.push_back(static_cast<double>(prefix) / static_cast<double>(k));
    }
    return out;
}

} // namespace rankeval
