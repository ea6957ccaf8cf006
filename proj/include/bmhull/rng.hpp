#pragma once

#include <cstdint>
#include <span>

namespace bmhull {

/// Identifies one independent random stream. Distinct (seed, replicate,
/// lane) triples map to distinct counter-mode cipher inputs, so their
/// streams never overlap and replay bit-identically across runs and
/// across any degree of parallelism.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    std::uint32_t lane = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// New key addressing the given sub-stream lane of the same (seed, replicate).
inline StreamKey derive(StreamKey key, std::uint32_t lane) {
    key.lane = lane;
    return key;
}

namespace detail {

struct Block {
    std::uint64_t x0 = 0;
    std::uint64_t x1 = 0;
};

/// Threefry-2x64, 20 rounds. Pure function of (key, counter).
Block threefry2x64(std::uint64_t k0, std::uint64_t k1,
                   std::uint64_t c0, std::uint64_t c1);

/// Map a 64-bit word to (0, 1]; never returns 0, so log() is always finite.
inline double to_unit_interval(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

}  // namespace detail

/// Standard normal variates drawn from the keyed counter stream via the
/// trigonometric Box-Muller transform (two variates per cipher block).
/// The transform is fixed; the sequence for a key is part of the contract.
class GaussianStream {
  public:
    explicit GaussianStream(StreamKey key) : key_(key) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        auto block = detail::threefry2x64(key_.seed, key_.replicate, counter_++,
                                          static_cast<std::uint64_t>(key_.lane));
        refill(block);
        return primary_;
    }

    void fill(std::span<double> out) {
        for (double& v : out) v = next();
    }

    const StreamKey& key() const { return key_; }

  private:
    void refill(detail::Block block);

    StreamKey key_;
    std::uint64_t counter_ = 0;
    double primary_ = 0.0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bmhull
