#pragma once

#include <cstdint>

namespace ilg {

/** splitmix64: tiny deterministic generator.  std::mt19937 + std distributions are not
 *  bit-stable across standard libraries; every seeded estimate in the library goes
 *  through this so that (seed, count) reproduces identical doubles everywhere. */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ULL);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /** Uniform in [0,1). */
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /** Uniform integer in [0, m). */
    std::uint64_t below(std::uint64_t m) { return next_u64() % m; }

  private:
    std::uint64_t state_ = 0;
};

}  // namespace ilg
