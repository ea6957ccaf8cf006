#include "bmhull/rng.hpp"

#include <cmath>
#include <numbers>

namespace bmhull {
namespace detail {

namespace {

constexpr std::uint64_t kKeyParity = 0x1BD11BDAA9FC1A22ull;
constexpr int kRotations[8] = {16, 42, 12, 31, 16, 32, 24, 21};

inline std::uint64_t rotl(std::uint64_t x, int r) {
    return (x << r) | (x >> (64 - r));
}

}  // namespace

Block threefry2x64(std::uint64_t k0, std::uint64_t k1,
                   std::uint64_t c0, std::uint64_t c1) {
    const std::uint64_t ks[3] = {k0, k1, kKeyParity ^ k0 ^ k1};
    std::uint64_t x0 = c0 + ks[0];
    std::uint64_t x1 = c1 + ks[1];
    for (int round = 0; round < 20; ++round) {
        x0 += x1;
        x1 = rotl(x1, kRotations[round % 8]);
        x1 ^= x0;
        if ((round + 1) % 4 == 0) {
            const int s = (round + 1) / 4;
            x0 += ks[s % 3];
            x1 += ks[(s + 1) % 3] + static_cast<std::uint64_t>(s);
        }
    }
    return {x0, x1};
}

}  // namespace detail

void GaussianStream::refill(detail::Block block) {
    const double u1 = detail::to_unit_interval(block.x0);
    const double u2 = detail::to_unit_interval(block.x1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    primary_ = radius * std::cos(angle);
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
}

}  // namespace bmhull
