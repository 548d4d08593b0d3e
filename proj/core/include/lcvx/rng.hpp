#pragma once

#include <cstdint>

namespace lcvx {

/// Counter-based generator: draw i of stream (seed, key) is a pure function
/// of (seed, key, i), computed with the SplitMix64 finalizer. Streams for
/// different keys never share state, so per-sample draws do not depend on
/// scheduling order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t key);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace lcvx
