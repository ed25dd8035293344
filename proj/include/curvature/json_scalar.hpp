#pragma once

#include <json.hpp>

#include "curvature/scalar.hpp"

namespace curv {

// Exact values are written as strings ("3/2", "1/2+i"), c64 as [re, im].
inline nlohmann::json scalar_json(const Rational& v) { return to_string(v); }
inline nlohmann::json scalar_json(const GaussRational& v) { return to_string(v); }
inline nlohmann::json scalar_json(double v) { return v; }
inline nlohmann::json scalar_json(const Complex& v) { return nlohmann::json::array({v.real(), v.imag()}); }

template <typename T>
T from_rational(const Rational& r) {
  if constexpr (ScalarTraits<T>::kExact) {
    return T(r);
  } else {
    return T(r.get_d());
  }
}

}  // namespace curv
