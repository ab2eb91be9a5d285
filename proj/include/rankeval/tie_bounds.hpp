#pragma once

#include <optional>

#include "rankeval/matrix.hpp"
#include "rankeval/ranking.hpp"

namespace rankeval {

/// Elementwise (1 - R) * epsilon.
struct PerturbationMatrix {
    std::size_t q_rows = 0;
    std::size_t k_cols = 0;
    double epsilon = 0.0;
    std::vector<double> values;

    double at(std::size_t q, std::size_t k) const { return values[q * k_cols + k]; }
};

struct MapBounds {
    double map_minus = 0.0;
    double map_plus = 0.0;
    double epsilon_used = 0.0;
};

/// Half the minimum strictly-positive within-row distance gap; 1.0 when every
/// row is constant.
double epsilon_select(const DistanceMatrix& d);

PerturbationMatrix perturbation(const RelevanceMatrix& r, double epsilon);

/// mAP bounds over all tie resolutions, via ranking D + E and D - E.
/// A caller-supplied epsilon must be positive and strictly below the smallest
/// positive within-row gap.
MapBounds map_bounds(const DistanceMatrix& d, const RelevanceMatrix& r,
                     std::optional<double> epsilon = {});

} // namespace rankeval
