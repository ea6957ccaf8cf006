#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bmhull/rng.hpp"
#include "oracles.hpp"

using namespace bmhull;

namespace {

std::vector<double> take(StreamKey key, std::size_t count) {
    GaussianStream stream(key);
    std::vector<double> out(count);
    stream.fill(out);
    return out;
}

}  // namespace

TEST_CASE("replay: identical variates for the same key") {
    StreamKey key{42, 7, 3};
    auto a = take(key, 1000);
    auto b = take(key, 1000);
    CHECK(a == b);
}

TEST_CASE("derive sets the lane and is deterministic") {
    StreamKey key{5, 9, 0};
    StreamKey lane5 = derive(key, 5);
    CHECK(lane5.seed == 5);
    CHECK(lane5.replicate == 9);
    CHECK(lane5.lane == 5);
    CHECK(derive(key, 5) == lane5);
    auto s1 = take(derive(key, 1), 256);
    auto s2 = take(derive(key, 2), 256);
    CHECK(s1 != s2);
}

TEST_CASE("distinct replicates are uncorrelated") {
    auto a = take(StreamKey{123, 0, 0}, 100000);
    auto b = take(StreamKey{123, 1, 0}, 100000);
    CHECK(std::abs(oracle::correlation(a, b)) < 0.01);
}

TEST_CASE("long-prefix mean is near zero") {
    auto xs = take(StreamKey{2718, 0, 0}, 1000000);
    CHECK(std::abs(oracle::sample_mean(xs)) < 0.004);
}

TEST_CASE("long-prefix variance is near one") {
    auto xs = take(StreamKey{31415, 0, 0}, 1000000);
    double mean = oracle::sample_mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double var = ss / (xs.size() - 1.0);
    // 3 sigma band for the variance of N(0,1) samples: 3 sqrt(2/N).
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / 1e6));
}

TEST_CASE("Kolmogorov-Smirnov against the standard normal below 0.01") {
    auto xs = take(StreamKey{777, 0, 0}, 100000);
    CHECK(oracle::ks_statistic_normal(xs) < 0.01);
}

TEST_CASE("counter blocks are pure functions of key and counter") {
    auto b1 = detail::threefry2x64(1, 2, 3, 4);
    auto b2 = detail::threefry2x64(1, 2, 3, 4);
    CHECK(b1.x0 == b2.x0);
    CHECK(b1.x1 == b2.x1);
    auto b3 = detail::threefry2x64(1, 2, 3, 5);
    CHECK((b3.x0 != b1.x0 || b3.x1 != b1.x1));
}

TEST_CASE("unit-interval mapping avoids zero") {
    CHECK(detail::to_unit_interval(0) > 0.0);
    CHECK(detail::to_unit_interval(~0ull) <= 1.0);
}

TEST_CASE("streams restarted mid-sequence replay exactly") {
    StreamKey key{99, 4, 1};
    GaussianStream a(key);
    std::vector<double> first(501);
    a.fill(first);
    auto whole = take(key, 1001);
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i] == whole[i]);
}
