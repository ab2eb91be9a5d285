#pragma once

#include <array>
#include <string>

#include "rankeval/distances.hpp"
#include "rankeval/matrix.hpp"
#include "rankeval/ranking.hpp"

namespace rankeval {

struct CollisionReport {
    double threshold = 0.0;
    std::size_t total_runs = 0;     ///< chained groups of 2+ cells
    std::size_t mixed_runs = 0;     ///< groups holding both relevances
    std::size_t colliding_cells = 0;
    std::vector<std::size_t> per_rank_histogram;
    std::string metric;
};

enum class CollisionCell : std::uint8_t { none = 0, relevant = 1, irrelevant = 2 };

/// Rows are queries, columns are rank positions after exclusion.
struct CollisionMap {
    std::vector<std::vector<CollisionCell>> cells;
};

/// Per row, sort distances ascending and chain consecutive pairs whose
/// difference is below the threshold; groups of two or more cells collide.
CollisionReport collision_counts(const DistanceMatrix& d, const RelevanceMatrix& r,
                                 double threshold);

CollisionMap render_collision_map(const DistanceMatrix& d, const RelevanceMatrix& r,
                                  double threshold);

/// One report per metric on the same embeddings, self-classification with
/// identity exclusion. Threshold order: euclidean, cosine, cityblock.
std::array<CollisionReport, 3> metric_comparison(const EmbeddingMatrix& embeddings,
                                                 const LabelVector& labels,
                                                 const std::array<double, 3>& thresholds,
                                                 PrecisionMode precision);

/// Binary PPM raster: white background, green for colliding relevant cells,
/// red for colliding non-relevant cells. drop_rows skips leading queries.
void write_collision_ppm(const CollisionMap& map, const std::string& path,
                         std::size_t drop_rows = 0);

} // namespace rankeval
