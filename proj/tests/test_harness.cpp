#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bmhull/harness.hpp"

using namespace bmhull;

namespace {

ExperimentConfig small_estimate() {
    ExperimentConfig config;
    config.command = "estimate";
    config.dim = 2;
    config.steps = 400;
    config.replicates = 300;
    config.seed = 7;
    return config;
}

}  // namespace

TEST_CASE("schedule: ordered results, zero replicates, failure naming") {
    auto squares = schedule(10, 4, [](std::int64_t i) { return i * i; });
    for (std::int64_t i = 0; i < 10; ++i) CHECK(squares[i] == i * i);

    auto empty = schedule(0, 4, [](std::int64_t i) { return i; });
    CHECK(empty.empty());

    try {
        schedule(10, 3, [](std::int64_t i) -> int {
            if (i == 5) throw std::runtime_error("boom");
            return 0;
        });
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("replicate 5") != std::string::npos);
        CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
}

TEST_CASE("schedule: serial and parallel agree elementwise") {
    auto job = [](std::int64_t i) { return std::sin(static_cast<double>(i)) * i; };
    auto serial = schedule(500, 1, job);
    auto parallel = schedule(500, 2, job);
    CHECK(serial == parallel);
}

TEST_CASE("judge verdicts against expanded bounds") {
    BoundRow bounds;
    bounds.lower = 1.0;
    bounds.upper = 2.0;
    Estimate est;
    est.mean = 1.5;
    est.ci_lo = 1.4;
    est.ci_hi = 1.6;
    CHECK(judge(est, bounds, 0.05) == Verdict::InBounds);
    est.mean = 0.5;
    est.ci_lo = 0.4;
    est.ci_hi = 0.6;
    CHECK(judge(est, bounds, 0.05) == Verdict::BelowLower);
    est.mean = 2.6;
    est.ci_lo = 2.5;
    est.ci_hi = 2.7;
    CHECK(judge(est, bounds, 0.05) == Verdict::AboveUpper);
    est.mean = 1.0;
    est.ci_lo = 0.9;
    est.ci_hi = 1.1;
    CHECK(judge(est, bounds, 0.05) == Verdict::Inconclusive);
}

TEST_CASE("verdicts shift when the bound row is perturbed") {
    // The verdict is a pure function of the bound row, which the runner takes
    // from the bounds module; squeezing the row must flip the verdict.
    Estimate est;
    est.mean = 1.5;
    est.ci_lo = 1.45;
    est.ci_hi = 1.55;
    BoundRow row = theorem_bounds(Quantity::D1, 2);  // [1.414, 2.355]
    CHECK(judge(est, row, 0.05) == Verdict::InBounds);
    BoundRow squeezed = row;
    squeezed.lower = 1.7;
    CHECK(judge(est, squeezed, 0.05) == Verdict::BelowLower);
    squeezed.lower = row.lower;
    squeezed.upper = 1.3;
    CHECK(judge(est, squeezed, 0.05) == Verdict::AboveUpper);
}

TEST_CASE("run is deterministic: repeated runs and worker counts") {
    ExperimentConfig config = small_estimate();
    config.workers = 1;
    RunResult serial = run(config);
    RunResult serial2 = run(config);
    CHECK(serial.text == serial2.text);
    config.workers = 2;
    RunResult parallel = run(config);
    CHECK(serial.text == parallel.text);
}

TEST_CASE("estimate rows carry bounds-module values verbatim") {
    RunResult result = run(small_estimate());
    REQUIRE(result.rows.size() == 4);
    for (const ReportRow& row : result.rows) {
        BoundRow expect = theorem_bounds(row.quantity, row.dim);
        CHECK(row.bounds.lower == expect.lower);
        CHECK(row.bounds.upper == expect.upper);
        CHECK(row.bounds.exact.has_value() == expect.exact.has_value());
        if (expect.exact) CHECK(*row.bounds.exact == *expect.exact);
    }
}

TEST_CASE("bounds command row count and CSV shape") {
    ExperimentConfig config;
    config.command = "bounds";
    config.nmax = 5;
    RunResult result = run(config);
    CHECK(result.rows.size() == 38);
    CHECK(result.exit_code == 0);
    auto lines = std::count(result.text.begin(), result.text.end(), '\n');
    CHECK(lines == 39);  // header + rows
    CHECK(result.text.rfind("quantity,dim,method,n_samples,mean,stderr,ci_lo,"
                            "ci_hi,censored_fraction,lower,exact,upper,verdict",
                            0) == 0);
}

TEST_CASE("json output mirrors the csv rows") {
    ExperimentConfig config;
    config.command = "bounds";
    config.nmax = 2;
    config.format = "json";
    RunResult result = run(config);
    CHECK(result.text.find("\"quantity\":\"ThetaS1\"") != std::string::npos);
    CHECK(result.text.find("\"exact\":null") != std::string::npos);
    auto objects = [&](const std::string& text) {
        std::size_t count = 0, pos = 0;
        while ((pos = text.find("{\"quantity\"", pos)) != std::string::npos) {
            ++count;
            ++pos;
        }
        return count;
    };
    CHECK(objects(result.text) == 14);  // 8 + 6 rows for n=1..2
}

TEST_CASE("inverse transform command emits MoM and plain rows") {
    ExperimentConfig config;
    config.command = "inverse";
    config.dim = 2;
    config.steps = 400;
    config.replicates = 300;
    config.method = "transform";
    config.seed = 11;
    RunResult result = run(config);
    CHECK(result.rows.size() == 8);  // 4 kinds x {mom, mean}
    int mom = 0, plain = 0;
    for (const ReportRow& row : result.rows) {
        if (row.method == "transform_mom") ++mom;
        if (row.method == "transform_mean") ++plain;
        CHECK(is_inverse_quantity(row.quantity));
    }
    CHECK(mom == 4);
    CHECK(plain == 4);
}

TEST_CASE("inverse direct command reports censored fractions") {
    ExperimentConfig config;
    config.command = "inverse";
    config.dim = 1;
    config.steps = 2000;
    config.replicates = 200;
    config.method = "direct";
    config.seed = 13;
    RunResult result = run(config);
    CHECK(result.rows.size() == 3);  // no surface row at n=1
    for (const ReportRow& row : result.rows) {
        REQUIRE(row.estimate.has_value());
        CHECK(row.estimate->censored_fraction < 0.001);
        CHECK(row.method == "direct");
    }
}

TEST_CASE("config validation maps to ConfigError") {
    ExperimentConfig config = small_estimate();
    config.replicates = 1;
    CHECK_THROWS_AS(run(config), ConfigError);
    config = small_estimate();
    config.steps = 10;
    CHECK_THROWS_AS(run(config), ConfigError);
    config = small_estimate();
    config.format = "xml";
    CHECK_THROWS_AS(run(config), ConfigError);
    config = small_estimate();
    config.command = "frobnicate";
    CHECK_THROWS_AS(run(config), ConfigError);
    config = small_estimate();
    config.command = "inverse";
    config.level = 0.0;
    CHECK_THROWS_AS(run(config), ConfigError);
}

TEST_CASE("report covers dims 1..nmax with verdict-driven exit code") {
    ExperimentConfig config;
    config.command = "report";
    config.nmax = 2;
    config.steps = 400;
    config.replicates = 400;
    config.method = "transform";
    config.seed = 3;
    RunResult result = run(config);
    // n=1: V,D,R + 3 kinds x 2 transform rows; n=2: 4 + 4 x 2.
    CHECK(result.rows.size() == (3 + 6) + (4 + 8));
    bool saw_dim1 = false, saw_dim2 = false;
    for (const ReportRow& row : result.rows) {
        saw_dim1 |= row.dim == 1;
        saw_dim2 |= row.dim == 2;
    }
    CHECK(saw_dim1);
    CHECK(saw_dim2);
    // Coarse grids bias V1 low, but verdicts only fail when the CI leaves the
    // expanded interval entirely; at 400 steps everything stays in range.
    CHECK(result.exit_code == 0);
}

TEST_CASE("stage command emits one record per replicate") {
    ExperimentConfig config;
    config.command = "stage";
    config.dim = 2;
    config.replicates = 5;
    config.dt_factor = 1e-3;
    config.seed = 17;
    RunResult result = run(config);
    auto lines = std::count(result.text.begin(), result.text.end(), '\n');
    CHECK(lines == 6);  // header + 5 replicates
    CHECK(result.text.rfind("replicate,T_1,T_2,simplex_volume,hull_volume,total_time",
                            0) == 0);
}

TEST_CASE("optimize command emits the certificate table") {
    ExperimentConfig config;
    config.command = "optimize";
    config.nmax = 3;
    RunResult result = run(config);
    CHECK(result.text.rfind("n,value,numeric_value,kkt_residual,coord_max_error", 0) ==
          0);
    auto lines = std::count(result.text.begin(), result.text.end(), '\n');
    CHECK(lines == 4);
}
