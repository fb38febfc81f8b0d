#pragma once

#include <cstdint>

namespace memdiff {

// Deterministic, platform-independent generator (splitmix64). Distribution
// mapping is explicit so runs are byte-reproducible across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double next_symmetric() { return 2.0 * next_unit() - 1.0; }

    // Independent stream for ensemble member `index`.
    static Rng member_stream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed);
        mix.state_ ^= 0x6a09e667f3bcc909ULL * (index + 1);
        mix.next_u64();
        return Rng(mix.next_u64());
    }

  private:
    std::uint64_t state_;
};

}  // namespace memdiff
