// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured numbers. Replicate counts are tuned for a two-core
// desk machine where the criterion itself does not pin them.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "bmhull/harness.hpp"
#include "bmhull/optimize.hpp"
#include "bmhull/stage.hpp"
#include "oracles.hpp"

using namespace bmhull;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::int64_t kSteps = 10000;

using Clock = std::chrono::steady_clock;

struct Criterion {
    const char* id;
    Clock::time_point start = Clock::now();
    bool ok = true;
    std::string detail;

    explicit Criterion(const char* id_) : id(id_) {}
    void require(bool cond, const std::string& what) {
        CHECK_MESSAGE(cond, what);
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    ~Criterion() {
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("[%s][%s] %.1fs%s%s\n", id, ok ? "PASS" : "FAIL", secs,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }
};

std::int64_t estimate_replicates(int dim) {
    switch (dim) {
        case 4: return 3000;
        case 5: return 800;
        default: return 10000;
    }
}

// One shared path/hull pass per dimension, reused by criteria 1, 2, 4, 5,
// 6 (transform side) and 10.
const FunctionalSamples& functionals(int dim) {
    static std::map<int, FunctionalSamples> cache;
    auto it = cache.find(dim);
    if (it == cache.end())
        it = cache
                 .emplace(dim, sample_functionals(dim, kSteps, estimate_replicates(dim),
                                                  kSeed, 0, 1.0, 0))
                 .first;
    return it->second;
}

const std::vector<double>& samples_for(const FunctionalSamples& s, Functional kind) {
    switch (kind) {
        case Functional::Volume: return s.volume;
        case Functional::SurfaceArea: return s.surface;
        case Functional::Diameter: return s.diameter;
        case Functional::Circumradius: return s.circumradius;
    }
    return s.volume;
}

std::string fmt_est(const Estimate& e) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.4f+-%.4f", e.mean, e.std_err);
    return buf;
}

}  // namespace

TEST_CASE("C1: closed-form volume means at n=2 and n=3") {
    Criterion crit("C1");
    struct Case {
        int dim;
        double ref;
    };
    for (Case c : {Case{2, eldan_mean_volume(2)}, Case{3, eldan_mean_volume(3)}}) {
        Estimate est = mean_with_ci(functionals(c.dim).volume);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "n=%d volume %s vs [0.95,1.00]x%.5f", c.dim,
                      fmt_est(est).c_str(), c.ref);
        crit.require(est.ci_hi >= 0.95 * c.ref && est.ci_lo <= c.ref, buf);
    }
}

TEST_CASE("C2: closed-form surface means at n=2 and n=3") {
    Criterion crit("C2");
    struct Case {
        int dim;
        double ref;
    };
    for (Case c : {Case{2, eldan_mean_surface(2)}, Case{3, eldan_mean_surface(3)}}) {
        Estimate est = mean_with_ci(functionals(c.dim).surface);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "n=%d surface %s vs [0.95,1.00]x%.5f", c.dim,
                      fmt_est(est).c_str(), c.ref);
        crit.require(est.ci_hi >= 0.95 * c.ref && est.ci_lo <= c.ref, buf);
    }
}

TEST_CASE("C3: ball exit-time means are r^2/n") {
    Criterion crit("C3");
    const double dt = 1e-5;
    for (int n : {1, 2, 3, 5}) {
        ExitSummary summary = sample_exit_times(n, dt, 10000, kSeed, 0);
        crit.require(summary.censored == 0, "censored exits at n=" + std::to_string(n));
        double mean = oracle::sample_mean(summary.times);
        double se = oracle::sample_stderr(summary.times);
        double target = ball_exit_mean(n, 1.0);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "n=%d mean %.5f vs %.5f (3se=%.5f)", n, mean,
                      target, 3.0 * se);
        crit.require(std::abs(mean - target) <= 3.0 * se + dt, buf);
    }
}

TEST_CASE("C4: diameter mean sandwich for n=1..5") {
    Criterion crit("C4");
    for (int n = 1; n <= 5; ++n) {
        Estimate est = mean_with_ci(functionals(n).diameter);
        BoundRow bounds = theorem_bounds(Quantity::D1, n);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "n=%d D %s vs [0.95x%.4f, %.4f]", n,
                      fmt_est(est).c_str(), bounds.lower, bounds.upper);
        crit.require(est.ci_lo >= 0.95 * bounds.lower && est.ci_hi <= bounds.upper,
                     buf);
    }
}

TEST_CASE("C5: circumradius mean sandwich for n=1..5") {
    Criterion crit("C5");
    for (int n = 1; n <= 5; ++n) {
        Estimate est = mean_with_ci(functionals(n).circumradius);
        BoundRow bounds = theorem_bounds(Quantity::R1, n);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "n=%d R %s vs [0.95x%.4f, %.4f]", n,
                      fmt_est(est).c_str(), bounds.lower, bounds.upper);
        crit.require(est.ci_lo >= 0.95 * bounds.lower && est.ci_hi <= bounds.upper,
                     buf);
    }
}

TEST_CASE("C6: inverse-process sandwiches and direct/transform agreement") {
    Criterion crit("C6");
    struct DirectPlan {
        std::int64_t replicates;
        std::int64_t steps_per_unit;
    };
    auto plan = [](int n) {
        switch (n) {
            case 1: return DirectPlan{10000, 10000};
            case 2: return DirectPlan{5000, 10000};
            case 3: return DirectPlan{2000, 10000};
            case 4: return DirectPlan{800, 5000};
            default: return DirectPlan{250, 2500};
        }
    };
    for (int n = 1; n <= 5; ++n) {
        const FunctionalSamples& samples = functionals(n);
        for (Functional kind : {Functional::Volume, Functional::SurfaceArea,
                                Functional::Diameter, Functional::Circumradius}) {
            if (kind == Functional::SurfaceArea && n == 1) continue;
            BoundRow bounds = theorem_bounds(
                kind == Functional::Volume        ? Quantity::ThetaV1
                : kind == Functional::SurfaceArea ? Quantity::ThetaS1
                : kind == Functional::Diameter    ? Quantity::ThetaD1
                                                  : Quantity::ThetaR1,
                n);
            Estimate mom = inverse_mean_via_transform(samples_for(samples, kind), kind,
                                                      n, AggMethod::MedianOfMeans);
            Estimate plain = inverse_mean_via_transform(samples_for(samples, kind),
                                                        kind, n, AggMethod::PlainMean);
            char buf[200];
            for (const Estimate* est : {&mom, &plain}) {
                std::snprintf(buf, sizeof(buf),
                              "n=%d Theta^%s %s (%s) outside [%.4f, %.4f] x 5%%", n,
                              functional_name(kind), fmt_est(*est).c_str(),
                              agg_method_name(est->method), bounds.lower, bounds.upper);
                crit.require(judge(*est, bounds, 0.05) == Verdict::InBounds, buf);
                crit.require(est->censored_fraction < 1e-6,
                             "degenerate samples in the transform");
            }

            DirectPlan p = plan(n);
            PassageSummary direct = sample_direct_passage(kind, n, p.steps_per_unit,
                                                          p.replicates, kSeed, 0, 1.0);
            double censored_fraction = static_cast<double>(direct.censored) /
                                       static_cast<double>(direct.total);
            crit.require(censored_fraction < 0.001, "censored fraction too large");
            Estimate dest = mean_with_ci(direct.times);
            double pooled = std::sqrt(oracle::sq(dest.std_err) +
                                      oracle::sq(plain.std_err));
            double slack = 3.0 * pooled + 0.05 * std::max(plain.mean, dest.mean);
            std::snprintf(buf, sizeof(buf),
                          "n=%d Theta^%s direct %s vs transform %s (slack %.4f)", n,
                          functional_name(kind), fmt_est(dest).c_str(),
                          fmt_est(plain).c_str(), slack);
            crit.require(std::abs(dest.mean - plain.mean) <= slack, buf);
        }
    }
}

TEST_CASE("C7: convex-program certificate") {
    Criterion crit("C7");
    for (int n = 1; n <= 20; ++n) {
        OptSolution exact = closed_form(OptProblem{n});
        crit.require(exact.kkt_residual < 1e-10,
                     "KKT residual too large at n=" + std::to_string(n));
        OptSolution numeric = solve_numeric(OptProblem{n}, 1e-10);
        double rel = std::abs(numeric.value - exact.value) / exact.value;
        crit.require(rel < 1e-8, "numeric value off at n=" + std::to_string(n));
    }
    oracle::TestRng rng(606);
    long long violations = 0;
    for (int n = 1; n <= 8; ++n) {
        OptProblem problem{n};
        double best = closed_form(problem).value;
        const double logfact = std::lgamma(n + 1.0);
        std::vector<double> x(n);
        for (int trial = 0; trial < 100000; ++trial) {
            double log_prod = 0.0;
            for (double& v : x) {
                v = std::exp(0.6 * rng.gauss());
                log_prod += std::log(v);
            }
            double shift = std::exp((logfact - log_prod) / n);
            double value = 0.0;
            for (int j = 0; j < n; ++j) {
                double xj = x[j] * shift;
                value += xj * xj / (n - j);
            }
            if (value < best - 1e-9) ++violations;
        }
    }
    crit.require(violations == 0, "feasible point beat the optimum");
}

TEST_CASE("C8: convexity probes for the objective and constraint") {
    Criterion crit("C8");
    for (int n = 1; n <= 8; ++n) {
        ConvexityReport report =
            convexity_probe(OptProblem{n}, 10000, StreamKey{kSeed, 0, 40});
        crit.require(report.violations_f == 0,
                     "midpoint violation for f at n=" + std::to_string(n));
        crit.require(report.violations_g == 0,
                     "midpoint violation for g at n=" + std::to_string(n));
        crit.require(report.hessian_fd_max_rel_err < 1e-4,
                     "Hessian mismatch at n=" + std::to_string(n));
    }
}

TEST_CASE("C9: stage construction at n=3 with optimal radii") {
    Criterion crit("C9");
    const int n = 3;
    const double dt_factor = 2e-5;
    StageRadii radii = optimal_radii(n);
    const double target = expected_total_time(n, radii);
    const double product = std::exp(std::lgamma(n + 1.0));
    const std::int64_t reps = 10000;
    auto results = schedule(reps, 0, [&](std::int64_t rep) {
        return run_construction(n, radii, dt_factor,
                                StreamKey{kSeed, static_cast<std::uint64_t>(rep), 50},
                                4000);
    });
    std::vector<double> totals;
    long long floor_failures = 0, hull_failures = 0, censored = 0;
    for (const StageResult& r : results) {
        if (r.censored) {
            ++censored;
            continue;
        }
        totals.push_back(r.total_time);
        if (!(r.simplex_volume * product >= product - 1e-9)) ++floor_failures;
        if (!(r.hull_volume >= r.simplex_volume - 1e-9)) ++hull_failures;
    }
    crit.require(censored == 0, "censored replicates");
    crit.require(floor_failures == 0, "simplex floor violated");
    crit.require(hull_failures == 0, "hull smaller than its simplex");
    double mean = oracle::sample_mean(totals);
    double se = oracle::sample_stderr(totals);
    double dt_allowance = 0.0;
    for (int j = 0; j < n; ++j)
        dt_allowance += dt_factor * radii.r[j] * radii.r[j] / (n - j);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "E[T3] %.4f+-%.4f vs %.4f", mean, se, target);
    crit.require(std::abs(mean - target) <= 3.0 * se + dt_allowance, buf);
}

TEST_CASE("C10: fixed-time scaling identities at n=2, t=4") {
    Criterion crit("C10");
    FunctionalSamples scaled = sample_functionals(2, kSteps, 10000, kSeed, 0, 4.0, 9);
    const FunctionalSamples& base = functionals(2);
    for (Functional kind : {Functional::Volume, Functional::SurfaceArea,
                            Functional::Diameter, Functional::Circumradius}) {
        ScalingReport report =
            scaling_check(samples_for(scaled, kind), samples_for(base, kind),
                          time_scaling_exponent(kind, 2), 4.0);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s z=%.2f", functional_name(kind),
                      report.z_score);
        crit.require(std::abs(report.z_score) < 3.0, buf);
    }
}

TEST_CASE("C11: diameter equals twice the circumradius on hyperrectangles") {
    Criterion crit("C11");
    oracle::TestRng rng(808);
    long long failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int d = 1 + trial % 6;
        Vec hw(d);
        for (double& w : hw) w = std::exp(rng.gauss());
        auto corners = hyperrectangle_corners(hw);
        double dia = diameter(corners);
        double rad = min_enclosing_ball(corners).radius;
        if (std::abs(dia - 2.0 * rad) > 1e-10 * 2.0 * rad) ++failures;
    }
    crit.require(failures == 0,
                 "D != 2R on " + std::to_string(failures) + " rectangles");
}

TEST_CASE("C12: geometry oracles") {
    Criterion crit("C12");
    oracle::TestRng rng(909);
    long long area_fail = 0, per_fail = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto pts = rng.gauss_points(40, 2);
        ConvexHull hull = build_hull(pts);
        double area = hull_volume(hull);
        double per = hull_surface_area(hull);
        double oracle_area = oracle::shoelace_hull_area(pts);
        double oracle_per = oracle::hull_perimeter_2d(pts);
        if (std::abs(area - oracle_area) > 1e-10 * oracle_area) ++area_fail;
        if (std::abs(per - oracle_per) > 1e-10 * oracle_per) ++per_fail;
    }
    crit.require(area_fail == 0, "planar area mismatches");
    crit.require(per_fail == 0, "planar perimeter mismatches");

    long long meb_fail = 0;
    for (int d = 1; d <= 4; ++d)
        for (int trial = 0; trial < 25; ++trial) {
            auto pts = rng.gauss_points(28, d);
            double r = min_enclosing_ball(pts).radius;
            double ref = oracle::meb_radius_exhaustive(pts);
            if (std::abs(r - ref) > 1e-9 * std::max(1.0, ref)) ++meb_fail;
        }
    crit.require(meb_fail == 0, "smallest-ball oracle mismatches");

    long long diam_fail = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int d = 2 + trial % 4;
        auto pts = rng.gauss_points(80, d);
        ConvexHull hull = build_hull(pts);
        std::vector<double> flat;
        for (auto& v : hull.vertices) flat.insert(flat.end(), v.begin(), v.end());
        double via_hull = diameter(flat.data(), hull.vertices.size(), d);
        if (via_hull != diameter(pts)) ++diam_fail;
    }
    crit.require(diam_fail == 0, "hull-vertex diameter != all-pairs diameter");
}

TEST_CASE("C13: asymptotic bound ratios at n=200") {
    Criterion crit("C13");
    auto [liminf_const, limsup_const] = asymptotic_constants();
    AsymptoticRatios r = asymptotic_ratios(200);
    // Both limit constants are attained within 2% by one of the V/S rows;
    // the remaining two ratios converge like (2/n) log(pi n) and are held to
    // the one-sided 0.9x / 1.1x checks.
    double lower_dev = std::min(std::abs(r.volume_lower / liminf_const - 1.0),
                                std::abs(r.surface_lower / liminf_const - 1.0));
    double upper_dev = std::min(std::abs(r.volume_upper / limsup_const - 1.0),
                                std::abs(r.surface_upper / limsup_const - 1.0));
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "ratios V:[%.5f, %.5f] S:[%.5f, %.5f] vs (%.5f, %.5f)",
                  r.volume_lower, r.volume_upper, r.surface_lower, r.surface_upper,
                  liminf_const, limsup_const);
    crit.require(lower_dev < 0.02 && upper_dev < 0.02, buf);
    crit.require(asymptotics_ok(200), "one-sided 0.9/1.1 asymptotic check");
}
