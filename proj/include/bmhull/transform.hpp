#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "bmhull/path.hpp"

namespace bmhull {

enum class AggMethod { PlainMean, MedianOfMeans };

const char* agg_method_name(AggMethod method);

struct Estimate {
    double mean = 0.0;
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t n_samples = 0;
    AggMethod method = AggMethod::PlainMean;
    double censored_fraction = 0.0;  // censored or degenerate-excluded share
};

struct AllDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sample mean with stderr = s/sqrt(N) and a 95% normal interval.
Estimate mean_with_ci(std::span<const double> samples);

/// Median of per-block means, blocks assigned round-robin by sample index.
/// Dispersion comes from block-mean quantiles: ci95 is the (2.5%, 97.5%)
/// block-mean interval and std_err the matching robust estimate
/// 1.2533 * IQR / (1.349 sqrt(blocks)).
Estimate median_of_means(std::span<const double> samples, int blocks);

Estimate aggregate(std::span<const double> samples, AggMethod method,
                   int blocks = 32);

/// Estimate of E[Theta_1^X] from samples of X_1 via the distributional
/// identity Theta_1^X = X_1^{-p}. Nonpositive samples are excluded and
/// counted in censored_fraction; throws AllDegenerate if none remain.
Estimate inverse_mean_via_transform(std::span<const double> samples_x1,
                                    Functional kind, int dim,
                                    AggMethod method = AggMethod::MedianOfMeans);

struct ScalingReport {
    double z_score = 0.0;
    double mean_t = 0.0;
    double mean_1_scaled = 0.0;  // t^p * mean(samples_1)
    double factor = 1.0;         // t^p
    Estimate est_t, est_1;
};

/// Compares mean(samples_t) against t^p * mean(samples_1) in pooled-stderr
/// units, per the fixed-time scaling identities.
ScalingReport scaling_check(std::span<const double> samples_t,
                            std::span<const double> samples_1, double exponent,
                            double t);

}  // namespace bmhull
