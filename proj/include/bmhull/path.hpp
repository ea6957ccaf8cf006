#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bmhull/geometry.hpp"
#include "bmhull/rng.hpp"

namespace bmhull {

/// A functional of the convex hull of the path. The attached scaling
/// exponents (time power for X_t, inverse-transform power for Theta) come
/// from the distributional identities of the hull under Brownian scaling.
enum class Functional { Volume, SurfaceArea, Diameter, Circumradius };

const char* functional_name(Functional kind);

/// Exponent p with X_t =d= t^p X_1: n/2, (n-1)/2, 1/2, 1/2.
double time_scaling_exponent(Functional kind, int dim);

/// Exponent p with Theta_1 =d= X_1^{-p}: 2/n, 2/(n-1), 2, 2.
double inverse_transform_exponent(Functional kind, int dim);

struct Unsupported : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PathConfig {
    int dim = 1;
    std::int64_t steps = 1;
    double horizon = 1.0;  // time units
    StreamKey key;

    double dt() const { return horizon / static_cast<double>(steps); }
};

/// Discretized Brownian trajectory; samples[k] ~ N(0, k dt I) exactly, and
/// the whole array replays bit-identically from the stream key.
struct BrownianPath {
    PathConfig config;
    std::vector<double> samples;  // (steps+1) x dim, row-major, row 0 = origin

    const double* at(std::int64_t k) const {
        return samples.data() + static_cast<std::size_t>(k) * config.dim;
    }
};

BrownianPath sample_path(const PathConfig& config);

/// All four functionals of the hull of the grid points up to time t,
/// sharing one hull build. For dim 1 the hull is the range interval and
/// surface area is undefined.
struct HullFunctionals {
    double volume = 0.0;
    std::optional<double> surface;
    double diameter = 0.0;
    double circumradius = 0.0;
};

HullFunctionals all_functionals_at(const BrownianPath& path, double t);
double functional_at(const BrownianPath& path, Functional kind, double t);
double functional_at_one(const BrownianPath& path, Functional kind);

/// sup of |W_s| over grid times s <= t.
double sup_norm(const BrownianPath& path, double t);

struct PassageSample {
    Functional kind = Functional::Volume;
    double level = 0.0;
    double time = 0.0;  // first grid time with X > level, or horizon
    bool censored = false;
};

/// Simulates incrementally and returns the first grid time at which the
/// functional exceeds `level`. The functional is recomputed on a checkpoint
/// schedule of ceil(steps/1024) grid steps and the exact grid crossing is
/// then recovered by bisection, which is valid because the functionals are
/// nondecreasing along the path.
PassageSample first_passage(const PathConfig& config, Functional kind,
                            double level);

struct ExitSample {
    double time = 0.0;
    bool censored = false;
};

/// First grid time with |W_t| >= radius.
ExitSample exit_time_ball(const PathConfig& config, double radius = 1.0);

}  // namespace bmhull
