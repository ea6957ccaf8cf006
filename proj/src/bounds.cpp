#include "bmhull/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bmhull {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;

double log_factorial(int n) { return std::lgamma(n + 1.0); }

/// n * (n!)^{1/n}, the optimal value of the stage-construction program.
double inverse_volume_upper(int n) {
    return n * std::exp(log_factorial(n) / n);
}

double inverse_volume_lower(int n) {
    return (2.0 / kPi) * std::exp((4.0 / n) * std::lgamma(1.0 + n / 2.0));
}

double inverse_surface_lower(int n) {
    return (1.0 / (2.0 * kPi)) *
           std::exp((2.0 / (n - 1.0)) * (std::lgamma(n) - kLog2));
}

/// log of omega_n * kappa_n^{(1-n)/n}: the surface area of the unit-volume
/// ball enters the surface upper bound through this combination.
double log_ball_shape_factor(int n) {
    double log_kappa = (n / 2.0) * std::log(kPi) - std::lgamma(1.0 + n / 2.0);
    double log_omega = kLog2 + (n / 2.0) * std::log(kPi) - std::lgamma(n / 2.0);
    return log_omega + ((1.0 - n) / n) * log_kappa;
}

double inverse_surface_upper(int n) {
    return std::exp((2.0 / (n - 1.0)) * log_ball_shape_factor(n)) *
           inverse_volume_upper(n);
}

}  // namespace

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::V1: return "V1";
        case Quantity::S1: return "S1";
        case Quantity::D1: return "D1";
        case Quantity::R1: return "R1";
        case Quantity::ThetaV1: return "ThetaV1";
        case Quantity::ThetaS1: return "ThetaS1";
        case Quantity::ThetaD1: return "ThetaD1";
        case Quantity::ThetaR1: return "ThetaR1";
    }
    return "?";
}

bool is_inverse_quantity(Quantity q) {
    return q == Quantity::ThetaV1 || q == Quantity::ThetaS1 ||
           q == Quantity::ThetaD1 || q == Quantity::ThetaR1;
}

double eldan_mean_volume(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    return std::exp((n / 2.0) * std::log(kPi / 2.0) -
                    2.0 * std::lgamma(1.0 + n / 2.0));
}

double eldan_mean_surface(int n) {
    if (n < 2)
        throw std::invalid_argument("surface mean defined for dimension >= 2");
    return std::exp(kLog2 + ((n - 1.0) / 2.0) * std::log(2.0 * kPi) -
                    std::lgamma(n));
}

BallConstants ball_constants(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    BallConstants c;
    c.dim = n;
    c.kappa = std::exp((n / 2.0) * std::log(kPi) - std::lgamma(1.0 + n / 2.0));
    c.omega = std::exp(kLog2 + (n / 2.0) * std::log(kPi) - std::lgamma(n / 2.0));
    return c;
}

double ball_exit_mean(int n, double r) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (r < 0.0) throw std::invalid_argument("radius must be >= 0");
    return r * r / n;
}

double feller_range_second_moment() { return 4.0 * kLog2; }

BoundRow theorem_bounds(Quantity q, int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    BoundRow row;
    row.quantity = q;
    row.dim = n;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    switch (q) {
        case Quantity::V1:
            row.exact = eldan_mean_volume(n);
            row.lower = row.upper = *row.exact;
            break;
        case Quantity::S1:
            row.exact = eldan_mean_surface(n);
            row.lower = row.upper = *row.exact;
            break;
        case Quantity::D1:
            row.lower = sqrt_n;
            row.upper = 2.0 * std::sqrt(kLog2) * sqrt_n;
            break;
        case Quantity::R1:
            row.lower = sqrt_n / 2.0;
            row.upper = std::sqrt(kLog2) * sqrt_n;
            break;
        case Quantity::ThetaV1:
            row.lower = inverse_volume_lower(n);
            row.upper = inverse_volume_upper(n);
            break;
        case Quantity::ThetaS1:
            if (n < 2)
                throw std::invalid_argument(
                    "inverse surface bounds defined for dimension >= 2");
            row.lower = inverse_surface_lower(n);
            row.upper = inverse_surface_upper(n);
            break;
        case Quantity::ThetaD1:
            row.lower = 1.0 / (4.0 * n * kLog2);
            row.upper = 1.0 / n;
            break;
        case Quantity::ThetaR1:
            row.lower = 1.0 / (n * kLog2);
            row.upper = 4.0 / n;
            break;
    }
    return row;
}

std::pair<double, double> asymptotic_constants() {
    return {1.0 / (2.0 * kPi * std::numbers::e * std::numbers::e),
            1.0 / std::numbers::e};
}

AsymptoticRatios asymptotic_ratios(int n) {
    AsymptoticRatios r;
    const double n2 = static_cast<double>(n) * n;
    r.volume_lower = inverse_volume_lower(n) / n2;
    r.volume_upper = inverse_volume_upper(n) / n2;
    r.surface_lower = inverse_surface_lower(n) / n2;
    r.surface_upper = inverse_surface_upper(n) / n2;
    return r;
}

bool asymptotics_ok(int n) {
    auto [liminf_const, limsup_const] = asymptotic_constants();
    AsymptoticRatios r = asymptotic_ratios(n);
    return r.volume_lower >= 0.9 * liminf_const &&
           r.surface_lower >= 0.9 * liminf_const &&
           r.volume_upper <= 1.1 * limsup_const &&
           r.surface_upper <= 1.1 * limsup_const;
}

std::vector<BoundRow> render_table(int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<BoundRow> rows;
    constexpr Quantity kAll[] = {Quantity::V1,      Quantity::S1,
                                 Quantity::D1,      Quantity::R1,
                                 Quantity::ThetaV1, Quantity::ThetaS1,
                                 Quantity::ThetaD1, Quantity::ThetaR1};
    for (int n = 1; n <= n_max; ++n)
        for (Quantity q : kAll) {
            if (n == 1 && (q == Quantity::S1 || q == Quantity::ThetaS1)) continue;
            rows.push_back(theorem_bounds(q, n));
        }
    return rows;
}

}  // namespace bmhull
