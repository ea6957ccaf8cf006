#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace bmhull {

/// The eight tabulated quantities: means of the four hull functionals at
/// time 1 and of their inverse (first-passage) processes at level 1.
enum class Quantity {
    V1,
    S1,
    D1,
    R1,
    ThetaV1,
    ThetaS1,
    ThetaD1,
    ThetaR1,
};

const char* quantity_name(Quantity q);
bool is_inverse_quantity(Quantity q);

/// One row of the bound table. `exact` is populated only where a closed
/// formula for that same quantity exists (the V1 / S1 means); for those rows
/// lower == exact == upper. The inverse-process rows carry the two-sided
/// theorem bounds and no exact value.
struct BoundRow {
    Quantity quantity = Quantity::V1;
    int dim = 1;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> exact;
};

/// E[V_1] = (pi/2)^{n/2} / Gamma(1+n/2)^2, evaluated in log space.
double eldan_mean_volume(int n);

/// E[S_1] = 2 (2 pi)^{(n-1)/2} / Gamma(n); defined for n >= 2.
double eldan_mean_surface(int n);

struct BallConstants {
    int dim = 1;
    double kappa = 0.0;  // unit-ball volume
    double omega = 0.0;  // unit-ball surface area
};

BallConstants ball_constants(int n);

/// Mean exit time r^2/n of Brownian motion from a centered radius-r ball.
double ball_exit_mean(int n, double r);

/// Second moment of the range of one-dimensional Brownian motion on [0,1].
double feller_range_second_moment();

BoundRow theorem_bounds(Quantity q, int n);

/// The dimension-free limits of the inverse volume/surface bound ratios:
/// (1/(2 pi e^2), 1/e).
std::pair<double, double> asymptotic_constants();

struct AsymptoticRatios {
    double volume_lower = 0.0;   // theta^V lower bound / n^2
    double volume_upper = 0.0;   // theta^V upper bound / n^2
    double surface_lower = 0.0;  // theta^S lower bound / n^2
    double surface_upper = 0.0;  // theta^S upper bound / n^2
};

AsymptoticRatios asymptotic_ratios(int n);

/// One-sided confirmation of the limit constants at finite n:
/// lower(n)/n^2 >= 0.9/(2 pi e^2) and upper(n)/n^2 <= 1.1/e for both
/// the volume and surface rows.
bool asymptotics_ok(int n);

/// All eight quantities for n = 1..n_max, omitting the surface rows at n=1.
std::vector<BoundRow> render_table(int n_max);

}  // namespace bmhull
