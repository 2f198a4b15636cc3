#pragma once

#include <cstdint>

namespace lshaped {

/// xorshift64* generator seeded through splitmix64.
///
/// The update rule is fixed so that sampled instances are reproducible by
/// any implementation:
///   state_0 = splitmix64(seed)            (0 is replaced by 0x9E3779B97F4A7C15)
///   x ^= x >> 12; x ^= x << 25; x ^= x >> 27;
///   output = x * 0x2545F4914F6CDD1D
/// and uniform() maps the top 53 output bits onto [0, 1).
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);

  std::uint64_t next();
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::uint64_t state_;
};

}  // namespace lshaped
