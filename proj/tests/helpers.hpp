#pragma once

#include <vector>

#include "curvature/proof_engine.hpp"
#include "curvature/random.hpp"

namespace curv::test {

inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline GaussRational gq(long re, long im) { return {Rational(re), Rational(im)}; }

// Small Gaussian integer with both parts in [-2, 2].
inline GaussRational random_gauss(Rng& rng) {
  return gq(rng.uniform_int(-2, 2), rng.uniform_int(-2, 2));
}

// Seeded Z-vector with up to two nonzero entries per block at random positions.
inline ZVector<GaussRational> random_zvector(const BlockSplit& split, Rng& rng) {
  std::vector<GaussRational> x(split.d1), y(split.d2);
  auto fill = [&](std::vector<GaussRational>& v) {
    const int first = static_cast<int>(rng.uniform_int(0, static_cast<long>(v.size()) - 1));
    v[first] = random_gauss(rng);
    if (v.size() > 1) {
      int second = static_cast<int>(rng.uniform_int(0, static_cast<long>(v.size()) - 2));
      if (second >= first) ++second;
      v[second] = random_gauss(rng);
    }
  };
  fill(x);
  fill(y);
  return {split, x, y};
}

inline std::vector<Rational> rational_vector(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

}  // namespace curv::test
