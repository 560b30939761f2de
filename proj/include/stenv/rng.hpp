#pragma once
#include <cstdint>
#include <random>

namespace stenv {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic substream RNG: mt19937_64 seeded from a splitmix64 mix of
// (seed, stream).  Identical (seed, stream) gives an identical draw sequence
// on every platform; uniforms are built from raw 64-bit output, not
// std::uniform_real_distribution.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed;
        (void)splitmix64(s);
        s ^= 0xD1B54A32D192ED03ULL * (stream + 1);
        const std::uint64_t w0 = splitmix64(s), w1 = splitmix64(s);
        gen_.seed(w0 ^ (w1 << 1));
    }

    std::uint64_t raw() { return gen_(); }

    // strictly inside (0,1)
    double uniform() { return (double(raw() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform()); }

  private:
    std::mt19937_64 gen_;
};

} // namespace stenv
