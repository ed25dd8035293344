#pragma once

#include <cstdint>
#include <random>

namespace curv {

/// Name and version of the generator recorded in every report.
inline constexpr const char* kPrngName = "mt19937_64/v1";

/// splitmix64 finalizer of (master, index); used to give every sample its own stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded generator. Exact-field draws use raw 64-bit words only, so fixtures
/// are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi);
  /// Uniform integer in [lo, hi] excluding zero.
  long nonzero_int(long lo, long hi);
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace curv
