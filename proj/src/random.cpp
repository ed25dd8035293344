#include "curvature/random.hpp"

namespace curv {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

long Rng::uniform_int(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(engine_() % span);
}

long Rng::nonzero_int(long lo, long hi) {
  for (;;) {
    long v = uniform_int(lo, hi);
    if (v != 0) return v;
  }
}

double Rng::normal() { return normal_(engine_); }

}  // namespace curv
