#include "bmhull/transform.hpp"

#include <algorithm>
#include <cmath>

namespace bmhull {

const char* agg_method_name(AggMethod method) {
    return method == AggMethod::PlainMean ? "plain_mean" : "median_of_means";
}

namespace {

// Type-7 (linear interpolation) quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted.front();
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto i = static_cast<std::size_t>(pos);
    if (i >= sorted.size() - 1) return sorted.back();
    double frac = pos - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

Estimate mean_with_ci(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("mean_with_ci needs at least 2 samples");
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / (n - 1.0));
    Estimate est;
    est.mean = mean;
    est.std_err = sd / std::sqrt(n);
    est.ci_lo = mean - 1.96 * est.std_err;
    est.ci_hi = mean + 1.96 * est.std_err;
    est.n_samples = samples.size();
    est.method = AggMethod::PlainMean;
    return est;
}

Estimate median_of_means(std::span<const double> samples, int blocks) {
    if (blocks < 3) throw std::invalid_argument("median_of_means needs >= 3 blocks");
    if (samples.size() < static_cast<std::size_t>(blocks))
        throw std::invalid_argument("median_of_means needs >= blocks samples");
    std::vector<double> sums(blocks, 0.0);
    std::vector<std::size_t> counts(blocks, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sums[i % blocks] += samples[i];
        counts[i % blocks] += 1;
    }
    std::vector<double> means(blocks);
    for (int b = 0; b < blocks; ++b) means[b] = sums[b] / static_cast<double>(counts[b]);
    std::sort(means.begin(), means.end());
    double median = blocks % 2 ? means[blocks / 2]
                               : 0.5 * (means[blocks / 2 - 1] + means[blocks / 2]);
    double iqr = quantile_sorted(means, 0.75) - quantile_sorted(means, 0.25);
    Estimate est;
    est.mean = median;
    est.std_err = 1.2533 * (iqr / 1.349) / std::sqrt(static_cast<double>(blocks));
    est.ci_lo = quantile_sorted(means, 0.025);
    est.ci_hi = quantile_sorted(means, 0.975);
    est.n_samples = samples.size();
    est.method = AggMethod::MedianOfMeans;
    return est;
}

Estimate aggregate(std::span<const double> samples, AggMethod method, int blocks) {
    if (method == AggMethod::PlainMean) return mean_with_ci(samples);
    return median_of_means(samples, blocks);
}

Estimate inverse_mean_via_transform(std::span<const double> samples_x1,
                                    Functional kind, int dim, AggMethod method) {
    const double p = inverse_transform_exponent(kind, dim);
    std::vector<double> transformed;
    transformed.reserve(samples_x1.size());
    std::size_t degenerate = 0;
    for (double x : samples_x1) {
        if (x > 0.0)
            transformed.push_back(std::pow(x, -p));
        else
            ++degenerate;
    }
    if (transformed.empty())
        throw AllDegenerate("no positive samples for the inverse transform");
    Estimate est = aggregate(transformed, method);
    est.censored_fraction =
        static_cast<double>(degenerate) / static_cast<double>(samples_x1.size());
    return est;
}

ScalingReport scaling_check(std::span<const double> samples_t,
                            std::span<const double> samples_1, double exponent,
                            double t) {
    if (samples_t.empty() || samples_1.empty())
        throw std::invalid_argument("scaling_check needs nonempty sample sets");
    if (!(t > 0.0)) throw std::invalid_argument("scaling_check needs t > 0");
    ScalingReport report;
    report.est_t = mean_with_ci(samples_t);
    report.est_1 = mean_with_ci(samples_1);
    report.factor = std::pow(t, exponent);
    report.mean_t = report.est_t.mean;
    report.mean_1_scaled = report.factor * report.est_1.mean;
    double pooled = std::sqrt(report.est_t.std_err * report.est_t.std_err +
                              report.factor * report.factor * report.est_1.std_err *
                                  report.est_1.std_err);
    double diff = report.mean_t - report.mean_1_scaled;
    report.z_score = pooled > 0.0 ? diff / pooled : (diff == 0.0 ? 0.0 : INFINITY);
    return report;
}

}  // namespace bmhull
