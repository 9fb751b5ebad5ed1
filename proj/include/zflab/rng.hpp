#ifndef ZFLAB_RNG_HPP
#define ZFLAB_RNG_HPP

#include <cmath>
#include <cstdint>

#include "zflab/core.hpp"

namespace zflab {

// Deterministic generator used everywhere randomness appears in checks and
// reports.  splitmix64 state transition; identical output on every platform,
// unlike the standard-library distributions whose streams are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian() {
    double u = uniform();
    double v = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * pi * v);
  }

  cplx gaussian_cplx() {
    double u = uniform();
    double v = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    double r = std::sqrt(-std::log(u));
    return {r * std::cos(2.0 * pi * v), r * std::sin(2.0 * pi * v)};
  }

  // Stable sub-stream derivation so independent checks can share one
  // configured seed without consuming each other's draws.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace zflab

#endif
