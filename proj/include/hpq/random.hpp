#pragma once

#include <cmath>
#include <cstdint>

namespace hpq {

/// 64-bit LCG, state' = a*state + c mod 2^64 with Knuth's MMIX constants
/// a = 6364136223846793005, c = 1442695040888963407.  Doubles use the top 53 bits.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) { next(); }

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on (0, 1], safe for log.
  double uniform_open() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  int below(int n) { return static_cast<int>((next() >> 33) % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
};

}  // namespace hpq
