#pragma once

#include <cstdint>

namespace entland {

/// SplitMix64. Portable and fully specified so sample-based outputs can be
/// reproduced in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() = (next() >> 11) · 2^-53, in [0, 1).
/// normal() uses one Box–Muller pair per call and keeps the cosine branch:
///   u1 = uniform(), u2 = uniform(), z = sqrt(-2 ln(1 - u1)) · cos(2π u2)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace entland
