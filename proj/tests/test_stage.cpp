#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bmhull/stage.hpp"
#include "oracles.hpp"

using namespace bmhull;

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

TEST_CASE("optimal radii and the active product constraint") {
    StageRadii r1 = optimal_radii(1);
    CHECK(r1.r.size() == 1);
    CHECK(r1.r[0] == doctest::Approx(1.0));

    StageRadii r2 = optimal_radii(2);
    CHECK(r2.r[0] == doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-12));
    CHECK(r2.r[1] == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));

    for (int n = 1; n <= 20; ++n) {
        StageRadii radii = optimal_radii(n);
        double log_prod = 0.0;
        for (double r : radii.r) log_prod += std::log(r);
        CHECK(log_prod == doctest::Approx(log_factorial(n)).epsilon(1e-12));
    }
}

TEST_CASE("expected total time telescopes the ball exit means") {
    StageRadii flat;
    flat.r = {1.0, 1.0};
    CHECK(expected_total_time(2, flat) == doctest::Approx(1.5));
    for (int n = 1; n <= 20; ++n) {
        double value = expected_total_time(n, optimal_radii(n));
        double target = n * std::exp(log_factorial(n) / n);
        CHECK(value == doctest::Approx(target).epsilon(1e-12));
    }
    StageRadii bad;
    bad.r = {1.0, -1.0};
    CHECK_THROWS_AS(expected_total_time(2, bad), std::invalid_argument);
}

TEST_CASE("Gram simplex volume") {
    std::vector<Vec> basis3 = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(gram_simplex_volume(basis3) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    std::vector<Vec> repeated = {{1, 0}, {1, 0}};
    CHECK(gram_simplex_volume(repeated) == 0.0);

    oracle::TestRng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec> xs(3, Vec(3));
        for (auto& x : xs)
            for (double& c : x) c = rng.gauss();
        // Direct 3x3 determinant oracle.
        const auto& a = xs[0];
        const auto& b = xs[1];
        const auto& c = xs[2];
        double det = a[0] * (b[1] * c[2] - b[2] * c[1]) -
                     a[1] * (b[0] * c[2] - b[2] * c[0]) +
                     a[2] * (b[0] * c[1] - b[1] * c[0]);
        CHECK(gram_simplex_volume(xs) ==
              doctest::Approx(std::abs(det) / 6.0).epsilon(1e-12));
    }
}

TEST_CASE("complement basis is orthonormal and annihilates the span") {
    oracle::TestRng rng(72);
    const int n = 5;
    std::vector<Vec> xs;
    for (int j = 0; j < 3; ++j) {
        Vec x(n);
        for (double& c : x) c = rng.gauss();
        xs.push_back(x);
    }
    auto basis = complement_basis(xs, n);
    CHECK(basis.size() == 2);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double dot = 0.0;
            for (int c = 0; c < n; ++c) dot += basis[i][c] * basis[j][c];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
        for (const auto& x : xs) {
            double dot = 0.0;
            for (int c = 0; c < n; ++c) dot += basis[i][c] * x[c];
            CHECK(std::abs(dot) < 1e-10);
        }
    }
}

TEST_CASE("n=1 construction is the exit time of (-r, r)") {
    const std::int64_t reps = 4000;
    StageRadii radii = optimal_radii(1);
    std::vector<double> times;
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        StageResult r = run_construction(
            1, radii, 2e-4, StreamKey{31, static_cast<std::uint64_t>(rep), 0}, 4000);
        REQUIRE(!r.censored);
        times.push_back(r.total_time);
        CHECK(r.hull_volume >= r.simplex_volume - 1e-9);
    }
    double mean = oracle::sample_mean(times);
    double se = oracle::sample_stderr(times);
    CHECK(std::abs(mean - 1.0) < 3.0 * se + 2e-4);
}

TEST_CASE("construction invariants per replicate, n=3") {
    const int n = 3;
    StageRadii radii = optimal_radii(n);
    const double product = std::exp(log_factorial(n));
    for (std::uint64_t rep = 0; rep < 60; ++rep) {
        StageResult r =
            run_construction(n, radii, 1e-4, StreamKey{32, rep, 0}, 4000);
        REQUIRE(!r.censored);
        REQUIRE(r.times.size() == 3);
        CHECK(r.times[0] < r.times[1]);
        CHECK(r.times[1] < r.times[2]);
        CHECK(r.times[2] == doctest::Approx(r.total_time));

        // Per-sample simplex floor: n! V(S) >= prod r_j (overshoot only grows it).
        CHECK(r.simplex_volume * std::exp(log_factorial(n)) >= product - 1e-9);
        CHECK(r.hull_volume >= r.simplex_volume - 1e-9);

        // Stage points are linearly independent and each stage ends outside
        // the projected ball.
        CHECK(gram_simplex_volume(r.points) > 0.0);

        // Orthogonality: x_k projects to zero on the complement of the
        // earlier stage points.
        for (std::size_t j = 1; j <= r.points.size(); ++j) {
            std::vector<Vec> head(r.points.begin(), r.points.begin() + j);
            auto basis = complement_basis(head, n);
            for (std::size_t k = 0; k < j; ++k)
                for (const auto& b : basis) {
                    double dot = 0.0;
                    for (int c = 0; c < n; ++c) dot += b[c] * r.points[k][c];
                    CHECK(std::abs(dot) < 1e-10);
                }
        }
    }
}

TEST_CASE("stage increments match the shrinking-dimension exit means") {
    const int n = 3;
    StageRadii radii = optimal_radii(n);
    const std::int64_t reps = 2500;
    std::vector<std::vector<double>> increments(n);
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        StageResult r = run_construction(
            n, radii, 5e-5, StreamKey{33, static_cast<std::uint64_t>(rep), 0}, 2000);
        REQUIRE(!r.censored);
        double prev = 0.0;
        for (int j = 0; j < n; ++j) {
            increments[j].push_back(r.times[j] - prev);
            prev = r.times[j];
        }
    }
    for (int j = 0; j < n; ++j) {
        double mean = oracle::sample_mean(increments[j]);
        double se = oracle::sample_stderr(increments[j]);
        double expect = radii.r[j] * radii.r[j] / (n - j);
        CHECK(std::abs(mean - expect) < 3.0 * se + 0.01 * expect);
    }
}

TEST_CASE("coarse grids overshoot more: bias shrinks with dt") {
    const int n = 2;
    StageRadii radii = optimal_radii(n);
    const std::int64_t reps = 1500;
    std::vector<double> coarse, fine;
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        coarse.push_back(run_construction(n, radii, 1e-2,
                                          StreamKey{34, static_cast<std::uint64_t>(rep), 0},
                                          2000)
                             .total_time);
        fine.push_back(run_construction(n, radii, 1e-4,
                                        StreamKey{35, static_cast<std::uint64_t>(rep), 0},
                                        2000)
                           .total_time);
    }
    const double target = expected_total_time(n, radii);
    double bias_coarse = oracle::sample_mean(coarse) - target;
    double bias_fine = oracle::sample_mean(fine) - target;
    CHECK(bias_coarse > 0.0);
    CHECK(bias_coarse > bias_fine);
}

TEST_CASE("run_construction validates its inputs") {
    StageRadii radii = optimal_radii(2);
    CHECK_THROWS_AS(run_construction(2, radii, 0.0, StreamKey{}, 1000),
                    std::invalid_argument);
    StageRadii wrong;
    wrong.r = {1.0};
    CHECK_THROWS_AS(run_construction(2, wrong, 1e-4, StreamKey{}, 1000),
                    std::invalid_argument);
}
