#include "rankeval/collision.hpp"

#include <algorithm>

#include "rankeval/io.hpp"

namespace rankeval {

namespace {

struct RankedRow {
    std::vector<std::size_t> idx; ///< database indices by ascending distance
};

RankedRow ranked_row(const DistanceMatrix& d, const RelevanceMatrix& r, std::size_t q) {
    RankedRow out;
    for (std::size_t k = 0; k < d.k_cols; ++k)
        if (!r.is_excluded(q, k)) out.idx.push_back(k);
    const auto row = d.row(q);
    std::sort(out.idx.begin(), out.idx.end(), [&](std::size_t a, std::size_t b) {
        if (row[a] != row[b]) return row[a] < row[b];
        return a < b;
    });
    return out;
}

template <typename GroupFn>
void for_each_group(const DistanceMatrix& d, const RelevanceMatrix& r,
                    double threshold, std::size_t q, const RankedRow& ranked,
                    GroupFn&& fn) {
    const auto row = d.row(q);
    std::size_t i = 0;
    while (i < ranked.idx.size()) {
        std::size_t j = i + 1;
        while (j < ranked.idx.size() &&
               row[ranked.idx[j]] - row[ranked.idx[j - 1]] < threshold)
            ++j;
        fn(i, j); // rank positions [i, j)
        i = j;
    }
}

} // namespace

CollisionReport collision_counts(const DistanceMatrix& d, const RelevanceMatrix& r,
                                 double threshold) {
    if (d.q_rows != r.q_rows || d.k_cols != r.k_cols)
        throw InputError("distance and relevance matrices have different shapes");
    if (!(threshold > 0.0))
        throw InputError("collision threshold must be positive");

    CollisionReport report;
    report.threshold = threshold;
    std::size_t max_len = 0;
    for (std::size_t q = 0; q < d.q_rows; ++q) {
        const RankedRow ranked = ranked_row(d, r, q);
        max_len = std::max(max_len, ranked.idx.size());
        if (report.per_rank_histogram.size() < max_len)
            report.per_rank_histogram.resize(max_len, 0);
        for_each_group(d, r, threshold, q, ranked, [&](std::size_t i, std::size_t j) {
            if (j - i < 2) return;
            ++report.total_runs;
            bool any_rel = false, any_irr = false;
            for (std::size_t p = i; p < j; ++p) {
                (r.relevant(q, ranked.idx[p]) ? any_rel : any_irr) = true;
                ++report.per_rank_histogram[p];
                ++report.colliding_cells;
            }
            if (any_rel && any_irr) ++report.mixed_runs;
        });
    }
    return report;
}

CollisionMap render_collision_map(const DistanceMatrix& d, const RelevanceMatrix& r,
                                  double threshold) {
    if (d.q_rows != r.q_rows || d.k_cols != r.k_cols)
        throw InputError("distance and relevance matrices have different shapes");
    if (!(threshold > 0.0))
        throw InputError("collision threshold must be positive");

    CollisionMap map;
    map.cells.resize(d.q_rows);
    for (std::size_t q = 0; q < d.q_rows; ++q) {
        const RankedRow ranked = ranked_row(d, r, q);
        map.cells[q].assign(ranked.idx.size(), CollisionCell::none);
        for_each_group(d, r, threshold, q, ranked, [&](std::size_t i, std::size_t j) {
            if (j - i < 2) return;
            for (std::size_t p = i; p < j; ++p)
                map.cells[q][p] = r.relevant(q, ranked.idx[p])
                                      ? CollisionCell::relevant
                                      : CollisionCell::irrelevant;
        });
    }
    return map;
}

std::array<CollisionReport, 3> metric_comparison(const EmbeddingMatrix& embeddings,
                                                 const LabelVector& labels,
                                                 const std::array<double, 3>& thresholds,
                                                 PrecisionMode precision) {
    if (labels.size() != embeddings.rows)
        throw InputError("label count does not match embedding rows");
    std::vector<std::ptrdiff_t> self_map(embeddings.rows);
    for (std::size_t i = 0; i < self_map.size(); ++i)
        self_map[i] = static_cast<std::ptrdiff_t>(i);
    const RelevanceMatrix r = relevance(labels, labels, self_map);

    const std::array<DistanceMetricKind, 3> kinds = {DistanceMetricKind::euclidean,
                                                     DistanceMetricKind::cosine,
                                                     DistanceMetricKind::cityblock};
    std::array<CollisionReport, 3> out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const DistanceMatrix d = pairwise_distances(embeddings, embeddings, kinds[i], precision);
        out[i] = collision_counts(d, r, thresholds[i]);
        out[i].metric = metric_name(kinds[i]);
    }
    return out;
}

void write_collision_ppm(const CollisionMap& map, const std::string& path,
                         std::size_t drop_rows) {
    const std::size_t first = std::min(drop_rows, map.cells.size());
    const std::size_t height = map.cells.size() - first;
    std::size_t width = 0;
    for (std::size_t q = first; q < map.cells.size(); ++q)
        width = std::max(width, map.cells[q].size());
    if (height == 0 || width == 0)
        throw InputError("collision map raster would be empty");

    std::string body = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    body.reserve(body.size() + width * height * 3);
    for (std::size_t q = first; q < map.cells.size(); ++q) {
        for (std::size_t c = 0; c < width; ++c) {
            CollisionCell cell = c < map.cells[q].size() ? map.cells[q][c] : CollisionCell::none;
            switch (cell) {
                case CollisionCell::none: body.append("\xff\xff\xff", 3); break;
                case CollisionCell::relevant: body.append("\x00\xa0\x00", 3); break;
                case CollisionCell::irrelevant: body.append("\xc8\x00\x00", 3); break;
            }
        }
    }
    write_file_atomic(path, body);
}

} // namespace rankeval
