// Deterministic random number streams (xoshiro256++ with splitmix64 seeding).
//
// Parallel runs derive one substream per worker from (master seed, stream
// index); results are reproducible for a fixed (seed, worker count) pair and
// independent of thread scheduling as long as partial results are merged in
// stream order.
#pragma once

#include <cstdint>

namespace hypererg {

// Seed expander; also usable as a cheap standalone generator.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ (Blackman & Vigna). State seeded through SplitMix64 so that
// any (seed, stream) pair, including 0, yields a valid nonzero state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 random bits. Not delegated to
    // std::uniform_real_distribution, whose output is implementation-defined.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace hypererg
