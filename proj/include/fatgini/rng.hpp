#pragma once

#include <cstdint>

namespace fatgini {

/// splitmix64 finalizer; bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and two coordinates
/// (e.g. sample size and replication index). Chained mixing keeps distinct
/// (a, b) pairs on distinct streams.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t a,
                                           std::uint64_t b) noexcept {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ mix64(a ^ 0x8BADF00D5EEDC0DEULL));
    s = mix64(s ^ mix64(b ^ 0xC0FFEE0DDF00D123ULL));
    return s;
}

/// xoshiro256** with splitmix64 state expansion. Output sequence is fully
/// determined by the seed, independent of platform or thread schedule.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw on the open interval (0, 1): never 0, never 1, so
    /// inverse-transform samplers cannot produce infinities.
    double next_open01() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace fatgini
