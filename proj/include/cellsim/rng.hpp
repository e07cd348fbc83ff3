#pragma once

#include <cstdint>
#include <cmath>

namespace cellsim {

/// PCG32 (pcg_xsh_rr_64_32, O'Neill 2014).
///
/// The simulator's only random source. Identical seeds produce identical
/// sequences on every platform; the std distributions make no such
/// guarantee, so nothing here uses them (or std::rand).
class RandomSource {
  public:
    RandomSource() : RandomSource(0, 0) {}

    /// Canonical PCG32 seeding: `seq` selects one of 2^63 independent
    /// streams for the same seed.
    RandomSource(std::uint64_t seed, std::uint64_t seq) {
        state_ = 0u;
        inc_ = (seq << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t range = hi - lo + 1;
        if (range == 0) return next_u64(); // full 64-bit range
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % range);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + v % range;
    }

  private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

/// Named streams derived from one root seed. Each simulation concern
/// draws from its own stream; changing the traffic pattern does not
/// perturb node placement or the off-window draws for the same seed.
enum class StreamId : std::uint64_t {
    Topology = 1,
    Mobility = 2,
    Traffic = 3,
    Policy = 4,
};

inline RandomSource make_stream(std::uint64_t root_seed, StreamId id) {
    return RandomSource(root_seed, static_cast<std::uint64_t>(id));
}

} // namespace cellsim
