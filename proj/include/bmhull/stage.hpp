#pragma once

#include <cstddef>
#include <vector>

#include "bmhull/geometry.hpp"
#include "bmhull/rng.hpp"

namespace bmhull {

struct StageRadii {
    std::vector<double> r;  // r_1, ..., r_n, all positive
};

/// Radii minimizing the expected total time under the unit simplex-volume
/// constraint: r_j = sqrt(n-j+1) (n!)^{1/(2n)}, the same point that solves
/// the convex program in the optimize module.
StageRadii optimal_radii(int n);

/// sum_j r_j^2 / (n-j+1): the mean exit times of balls of radius r_j by
/// Brownian motion in n-j+1 dimensions, telescoped over the stages.
double expected_total_time(int n, const StageRadii& radii);

/// sqrt(det G)/n! for the Gram matrix of the vectors; 0 when dependent.
double gram_simplex_volume(const std::vector<Vec>& vectors);

struct StageResult {
    std::vector<double> times;   // T_1 < ... < T_n
    std::vector<Vec> points;     // x_1, ..., x_n
    double simplex_volume = 0.0;
    double hull_volume = 0.0;
    double total_time = 0.0;
    bool censored = false;
};

/// Runs the n-stage construction: stage j stops at the first grid time when
/// the projection of W onto the orthogonal complement of span{x_1..x_{j-1}}
/// leaves the radius-r_j ball. Per-stage step size is dt_factor times the
/// expected stage time. Visited grid points are stride-subsampled to at most
/// hull_point_cap for the closing hull-volume computation; the stage points
/// themselves are always retained, so hull_volume >= simplex_volume holds
/// replicate by replicate.
StageResult run_construction(int n, const StageRadii& radii, double dt_factor,
                             StreamKey key, std::size_t hull_point_cap = 20000);

/// Orthonormal basis (columns) of the orthogonal complement of span(xs).
std::vector<Vec> complement_basis(const std::vector<Vec>& xs, int dim);

}  // namespace bmhull
