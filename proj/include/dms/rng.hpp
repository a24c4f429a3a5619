#pragma once

#include <array>
#include <cstdint>

namespace dms {

// SplitMix64, used to expand (seed, stream_id) into generator state.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256** keyed by (seed, stream_id). The pair fully determines the
/// sequence, independent of platform word order or thread schedule, so every
/// (product, replication) cell can own a private reproducible stream.
/// Value type; cheap to copy and safe to move across threads.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 mix(seed ^ scramble(stream_id));
        for (auto& word : state_) word = mix.next();
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5ULL, 7) * 9ULL;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on the centered lattice in (0, 1); never returns an exact
    /// endpoint, which keeps quantile inversions finite.
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static std::uint64_t scramble(std::uint64_t x) {
        return SplitMix64(x * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL).next();
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace dms
