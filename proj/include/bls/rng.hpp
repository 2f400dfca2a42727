#pragma once

#include <cstdint>
#include <random>

#include "bls/types.hpp"

namespace bls {

/// Pinned random source: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) with hand-written uniform and Box-Muller normal
/// transforms, since the standard distributions are
/// implementation-defined. Identical seeds give identical streams on every
/// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream `index` of `seed` (SplitMix64 mixing of both).
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vector normal_vector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace bls
