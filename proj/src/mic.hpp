#pragma once

#include <span>
#include <vector>

#include "error.hpp"

namespace crl {

// Grid-based normalized mutual information statistics of pairwise
// association. The characteristic matrix entry for a k x l grid is the best
// empirical MI over grids of that shape, normalized by log(min(k, l));
// admissible shapes satisfy k, l >= 2 and k*l <= ceil(n^0.6).
//
// Grid search follows the published estimator family: one axis is
// equipartitioned, the other optimized by dynamic programming over clump
// boundaries, with the clump count capped at 15 per requested column. Both
// orientations are evaluated and the better one kept.
struct CharacteristicStats {
    double mic = 0.0;  // max over admissible shapes
    double tic = 0.0;  // mean over admissible shapes
};

CharacteristicStats characteristic_stats(std::span<const double> x, std::span<const double> y,
                                         Warnings* warnings = nullptr);

double mic_pair(std::span<const double> x, std::span<const double> y, Warnings* warnings = nullptr);
double tic_pair(std::span<const double> x, std::span<const double> y, Warnings* warnings = nullptr);

// Exposed for the optimizer's brute-force oracle tests: best MI (in nats)
// over x-partitions into at most `max_cols` parts placed on clump boundaries,
// given fixed row labels; returns one value per column budget 2..max_cols.
std::vector<double> optimize_axis_mi(const std::vector<int>& row_of_point_in_x_order, int rows,
                                     int max_cols, int clump_factor);

}  // namespace crl
