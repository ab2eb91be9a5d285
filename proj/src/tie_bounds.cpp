#include "rankeval/tie_bounds.hpp"

#include <algorithm>
#include <limits>

namespace rankeval {

namespace {

/// Minimum strictly-positive difference between any two distances sharing a
/// row, or +inf when every row is constant.
double min_positive_gap(const DistanceMatrix& d) {
    double g = std::numeric_limits<double>::infinity();
    std::vector<double> row;
    for (std::size_t q = 0; q < d.q_rows; ++q) {
        const auto r = d.row(q);
        row.assign(r.begin(), r.end());
        std::sort(row.begin(), row.end());
        for (std::size_t i = 1; i < row.size(); ++i) {
            const double diff = row[i] - row[i - 1];
            if (diff > 0.0 && diff < g) g = diff;
        }
    }
    return g;
}

} // namespace

double epsilon_select(const DistanceMatrix& d) {
    const double g = min_positive_gap(d);
    if (!std::isfinite(g)) return 1.0;
    return g / 2.0;
}

PerturbationMatrix perturbation(const RelevanceMatrix& r, double epsilon) {
    if (!(epsilon > 0.0))
        throw InputError("perturbation epsilon must be positive");
    PerturbationMatrix e;
    e.q_rows = r.q_rows;
    e.k_cols = r.k_cols;
    e.epsilon = epsilon;
    e.values.resize(r.q_rows * r.k_cols);
    for (std::size_t i = 0; i < e.values.size(); ++i)
        e.values[i] = r.rel[i] ? 0.0 : epsilon;
    return e;
}

MapBounds map_bounds(const DistanceMatrix& d, const RelevanceMatrix& r,
                     std::optional<double> epsilon) {
    if (d.q_rows != r.q_rows || d.k_cols != r.k_cols)
        throw InputError("distance and relevance matrices have different shapes");

    double eps;
    if (epsilon) {
        eps = *epsilon;
        if (!(eps > 0.0))
            throw InputError("epsilon override must be positive");
        const double g = min_positive_gap(d);
        if (std::isfinite(g) && eps >= g)
            throw InputError("epsilon override would reorder non-tied pairs");
    } else {
        eps = epsilon_select(d);
    }

    const PerturbationMatrix e = perturbation(r, eps);
    DistanceMatrix plus(d.q_rows, d.k_cols);
    DistanceMatrix minus(d.q_rows, d.k_cols);
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        plus.values[i] = d.values[i] + e.values[i];
        minus.values[i] = d.values[i] - e.values[i];
    }

    // After perturbation no mixed-relevance tie remains, so the policy is moot.
    const TiePolicy policy = TiePolicy::stable();
    MapBounds out;
    out.map_plus = mean_average_precision(rank_correct(plus, r, policy));
    out.map_minus = mean_average_precision(rank_correct(minus, r, policy));
    out.epsilon_used = eps;
    return out;
}

} // namespace rankeval
