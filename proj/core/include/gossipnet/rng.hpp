#pragma once

#include <array>
#include <cstdint>

namespace gossipnet {

/// SplitMix64 finalizer (Steele et al.); full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
}

/// Derives an independent stream seed from a master seed and up to two
/// stream labels. Every (graph, source, site) gets its own reproducible
/// stream, so results do not depend on evaluation or thread order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
    std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (a + 0xbf58476d1ce4e5b9ULL));
    h = mix64(h ^ (b + 0x94d049bb133111ebULL));
    return h;
}

/// xoshiro256** (Blackman/Vigna), seeded via SplitMix64. Hand-rolled so
/// that streams are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_)
            word = splitmix64_next(sm);
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

    /// Uniform double in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in {0, ..., bound-1}; unbiased via rejection.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold)
                return r % bound;
        }
    }

    /// True with probability p. p >= 1 is always true, p <= 0 never.
    bool bernoulli(double p) noexcept { return next_double() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace gossipnet
