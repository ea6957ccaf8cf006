#include "bmhull/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmhull {

const char* functional_name(Functional kind) {
    switch (kind) {
        case Functional::Volume: return "V";
        case Functional::SurfaceArea: return "S";
        case Functional::Diameter: return "D";
        case Functional::Circumradius: return "R";
    }
    return "?";
}

double time_scaling_exponent(Functional kind, int dim) {
    switch (kind) {
        case Functional::Volume: return dim / 2.0;
        case Functional::SurfaceArea: return (dim - 1) / 2.0;
        case Functional::Diameter:
        case Functional::Circumradius: return 0.5;
    }
    return 0.0;
}

double inverse_transform_exponent(Functional kind, int dim) {
    switch (kind) {
        case Functional::Volume: return 2.0 / dim;
        case Functional::SurfaceArea:
            if (dim < 2) throw Unsupported("surface area undefined in dimension 1");
            return 2.0 / (dim - 1);
        case Functional::Diameter:
        case Functional::Circumradius: return 2.0;
    }
    return 0.0;
}

BrownianPath sample_path(const PathConfig& config) {
    if (config.dim < 1 || config.steps < 1 || !(config.horizon > 0.0))
        throw std::invalid_argument("invalid path configuration");
    BrownianPath path;
    path.config = config;
    const int n = config.dim;
    const double sdt = std::sqrt(config.dt());
    path.samples.assign(static_cast<std::size_t>(config.steps + 1) * n, 0.0);
    GaussianStream stream(config.key);
    for (std::int64_t k = 1; k <= config.steps; ++k) {
        const double* prev = path.at(k - 1);
        double* cur = path.samples.data() + static_cast<std::size_t>(k) * n;
        for (int c = 0; c < n; ++c) cur[c] = prev[c] + sdt * stream.next();
    }
    return path;
}

namespace {

std::int64_t prefix_count(const BrownianPath& path, double t) {
    if (t < 0.0) throw std::invalid_argument("negative time");
    if (t > path.config.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("time beyond path horizon");
    const double dt = path.config.dt();
    auto k = static_cast<std::int64_t>(std::floor(t / dt + 1e-9));
    return std::min(k, path.config.steps);
}

struct RangeTracker {
    double lo = 0.0, hi = 0.0;
    void absorb(double x) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    double range() const { return hi - lo; }
};

double range_functional(Functional kind, double range) {
    switch (kind) {
        case Functional::Volume:
        case Functional::Diameter: return range;
        case Functional::Circumradius: return range / 2.0;
        case Functional::SurfaceArea:
            throw Unsupported("surface area undefined in dimension 1");
    }
    return 0.0;
}

// Flattened hull vertices, for follow-up diameter / circumradius queries.
std::vector<double> flat_vertices(const ConvexHull& hull) {
    std::vector<double> flat;
    flat.reserve(hull.vertices.size() * hull.dim);
    for (const auto& v : hull.vertices) flat.insert(flat.end(), v.begin(), v.end());
    return flat;
}

}  // namespace

HullFunctionals all_functionals_at(const BrownianPath& path, double t) {
    const int n = path.config.dim;
    const std::int64_t k = prefix_count(path, t);
    HullFunctionals out;
    if (n == 1) {
        RangeTracker r;
        for (std::int64_t i = 1; i <= k; ++i) r.absorb(path.samples[i]);
        out.volume = r.range();
        out.diameter = r.range();
        out.circumradius = r.range() / 2.0;
        return out;
    }
    try {
        ConvexHull hull = build_hull(path.samples.data(), k + 1, n);
        out.volume = hull_volume(hull);
        out.surface = hull_surface_area(hull);
        std::vector<double> verts = flat_vertices(hull);
        out.diameter = diameter(verts.data(), hull.vertices.size(), n);
        out.circumradius =
            min_enclosing_ball(verts.data(), hull.vertices.size(), n).radius;
    } catch (const DegenerateInput&) {
        // Flat point set: volume and surface vanish; diameter and
        // circumradius are still well defined on a subsample.
        out.volume = 0.0;
        out.surface = 0.0;
        std::vector<double> sub;
        const std::int64_t stride = std::max<std::int64_t>(1, (k + 1) / 4096);
        for (std::int64_t i = 0; i <= k; i += stride)
            sub.insert(sub.end(), path.at(i), path.at(i) + n);
        const std::size_t cnt = sub.size() / n;
        out.diameter = diameter(sub.data(), cnt, n);
        out.circumradius = min_enclosing_ball(sub.data(), cnt, n).radius;
    }
    return out;
}

double functional_at(const BrownianPath& path, Functional kind, double t) {
    const int n = path.config.dim;
    if (n == 1) {
        const std::int64_t k = prefix_count(path, t);
        RangeTracker r;
        for (std::int64_t i = 1; i <= k; ++i) r.absorb(path.samples[i]);
        return range_functional(kind, r.range());
    }
    HullFunctionals all = all_functionals_at(path, t);
    switch (kind) {
        case Functional::Volume: return all.volume;
        case Functional::SurfaceArea: return *all.surface;
        case Functional::Diameter: return all.diameter;
        case Functional::Circumradius: return all.circumradius;
    }
    return 0.0;
}

double functional_at_one(const BrownianPath& path, Functional kind) {
    return functional_at(path, kind, 1.0);
}

double sup_norm(const BrownianPath& path, double t) {
    const int n = path.config.dim;
    const std::int64_t k = prefix_count(path, t);
    double best = 0.0;
    for (std::int64_t i = 0; i <= k; ++i) {
        const double* x = path.at(i);
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += x[c] * x[c];
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

namespace {

// Incremental state for first-passage detection in dimension >= 2. The
// confirmed prefix is represented by its hull vertices only; that loses
// nothing because conv(A u B) = conv(vert(conv A) u B).
class PassageEvaluator {
  public:
    PassageEvaluator(Functional kind, int dim) : kind_(kind), dim_(dim) {}

    void push(const double* x) {
        batch_.insert(batch_.end(), x, x + dim_);
        for (int c = 0; c < dim_; ++c) {
            lo_[c] = std::min(lo_[c], x[c]);
            hi_[c] = std::max(hi_[c], x[c]);
        }
    }

    std::size_t batch_points() const { return batch_.size() / dim_; }

    // Upper bound for the functional from the circumscribed box; the hull
    // is contained in the box, and all four functionals are monotone under
    // convex inclusion.
    double box_bound() const {
        switch (kind_) {
            case Functional::Volume: {
                double v = 1.0;
                for (int c = 0; c < dim_; ++c) v *= hi_[c] - lo_[c];
                return v;
            }
            case Functional::SurfaceArea: {
                double s = 0.0;
                for (int j = 0; j < dim_; ++j) {
                    double face = 2.0;
                    for (int c = 0; c < dim_; ++c)
                        if (c != j) face *= hi_[c] - lo_[c];
                    s += face;
                }
                return s;
            }
            case Functional::Diameter:
            case Functional::Circumradius: {
                double diag2 = 0.0;
                for (int c = 0; c < dim_; ++c) diag2 += (hi_[c] - lo_[c]) * (hi_[c] - lo_[c]);
                double diag = std::sqrt(diag2);
                return kind_ == Functional::Diameter ? diag : diag / 2.0;
            }
        }
        return std::numeric_limits<double>::infinity();
    }

    // Functional of the confirmed vertices plus the first `upto` batch points.
    double value(std::size_t upto) const {
        std::vector<double> cand(verts_);
        cand.insert(cand.end(), batch_.begin(), batch_.begin() + upto * dim_);
        const std::size_t cnt = cand.size() / dim_;
        if (cnt >= std::size_t(dim_) + 1) {
            try {
                ConvexHull hull = build_hull(cand.data(), cnt, dim_);
                switch (kind_) {
                    case Functional::Volume: return hull_volume(hull);
                    case Functional::SurfaceArea: return hull_surface_area(hull);
                    case Functional::Diameter: {
                        std::vector<double> fv = flat_vertices(hull);
                        return diameter(fv.data(), hull.vertices.size(), dim_);
                    }
                    case Functional::Circumradius: {
                        std::vector<double> fv = flat_vertices(hull);
                        return min_enclosing_ball(fv.data(), hull.vertices.size(), dim_)
                            .radius;
                    }
                }
            } catch (const DegenerateInput&) {
                // fall through to the flat-set cases below
            }
        }
        switch (kind_) {
            case Functional::Volume:
            case Functional::SurfaceArea: return 0.0;
            case Functional::Diameter: return diameter(cand.data(), cnt, dim_);
            case Functional::Circumradius:
                return cnt == 0 ? 0.0
                                : min_enclosing_ball(cand.data(), cnt, dim_).radius;
        }
        return 0.0;
    }

    // Fold the whole batch into the confirmed vertex set.
    void compact() {
        std::vector<double> cand(verts_);
        cand.insert(cand.end(), batch_.begin(), batch_.end());
        const std::size_t cnt = cand.size() / dim_;
        if (cnt >= std::size_t(dim_) + 1) {
            try {
                ConvexHull hull = build_hull(cand.data(), cnt, dim_);
                verts_ = flat_vertices(hull);
                batch_.clear();
                return;
            } catch (const DegenerateInput&) {
            }
        }
        verts_ = std::move(cand);
        batch_.clear();
    }

    void seed_origin() {
        verts_.assign(dim_, 0.0);
        lo_.assign(dim_, 0.0);
        hi_.assign(dim_, 0.0);
    }

  private:
    Functional kind_;
    int dim_;
    std::vector<double> verts_;  // confirmed hull vertices, flat
    std::vector<double> batch_;  // grid points since the last compaction
    std::vector<double> lo_, hi_;
};

}  // namespace

PassageSample first_passage(const PathConfig& config, Functional kind,
                            double level) {
    if (!(level > 0.0)) throw std::invalid_argument("passage level must be > 0");
    if (config.dim < 1 || config.steps < 1 || !(config.horizon > 0.0))
        throw std::invalid_argument("invalid path configuration");
    if (kind == Functional::SurfaceArea && config.dim == 1)
        throw Unsupported("surface area undefined in dimension 1");

    const int n = config.dim;
    const std::int64_t m = config.steps;
    const double dt = config.dt();
    const double sdt = std::sqrt(dt);
    GaussianStream stream(config.key);

    PassageSample out;
    out.kind = kind;
    out.level = level;

    if (n == 1) {
        RangeTracker r;
        double w = 0.0;
        for (std::int64_t k = 1; k <= m; ++k) {
            w += sdt * stream.next();
            r.absorb(w);
            if (range_functional(kind, r.range()) > level) {
                out.time = static_cast<double>(k) * dt;
                return out;
            }
        }
        out.time = config.horizon;
        out.censored = true;
        return out;
    }

    PassageEvaluator eval(kind, n);
    eval.seed_origin();
    std::vector<double> w(n, 0.0);
    const std::int64_t stride = std::max<std::int64_t>(1, (m + 1023) / 1024);
    std::int64_t batch_start = 0;  // grid index preceding the first batch point
    std::int64_t confirmed = 0;    // last grid index known to have X <= level

    for (std::int64_t k = 1; k <= m; ++k) {
        for (int c = 0; c < n; ++c) w[c] += sdt * stream.next();
        eval.push(w.data());
        if (k % stride != 0 && k != m) continue;

        if (eval.box_bound() <= level) {
            // The box bound certifies X(k) <= level without a hull build.
            if (eval.batch_points() >= 8192) {
                eval.compact();
                batch_start = k;
            }
            confirmed = k;
            continue;
        }
        if (eval.value(static_cast<std::size_t>(k - batch_start)) > level) {
            // First crossing lies in (confirmed, k]; bisect over batch offsets.
            std::int64_t lo = confirmed - batch_start;
            std::int64_t hi = k - batch_start;
            while (hi - lo > 1) {
                std::int64_t mid = lo + (hi - lo) / 2;
                if (eval.value(static_cast<std::size_t>(mid)) > level)
                    hi = mid;
                else
                    lo = mid;
            }
            out.time = static_cast<double>(batch_start + hi) * dt;
            return out;
        }
        eval.compact();
        batch_start = k;
        confirmed = k;
    }
    out.time = config.horizon;
    out.censored = true;
    return out;
}

ExitSample exit_time_ball(const PathConfig& config, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
    if (config.dim < 1 || config.steps < 1 || !(config.horizon > 0.0))
        throw std::invalid_argument("invalid path configuration");
    const int n = config.dim;
    const double dt = config.dt();
    const double sdt = std::sqrt(dt);
    const double r2 = radius * radius;
    GaussianStream stream(config.key);
    std::vector<double> w(n, 0.0);
    for (std::int64_t k = 1; k <= config.steps; ++k) {
        double norm2 = 0.0;
        for (int c = 0; c < n; ++c) {
            w[c] += sdt * stream.next();
            norm2 += w[c] * w[c];
        }
        if (norm2 >= r2) return {static_cast<double>(k) * dt, false};
    }
    return {config.horizon, true};
}

}  // namespace bmhull
