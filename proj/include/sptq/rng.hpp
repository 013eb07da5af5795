#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sptq {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream keyed by (seed, experiment, realization). Draws within a stream are
// sequential, so results never depend on which thread runs a realization.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t experiment, std::uint64_t realization)
      : eng_(splitmix64(splitmix64(splitmix64(seed) ^ experiment) ^ realization)) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal() {
    // Box-Muller, one value per call
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sptq
