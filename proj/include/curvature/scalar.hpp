#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace curv {

using Rational = mpq_class;

/// Exact a + b·i with rational a, b.
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(const Rational& re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  GaussRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }
  GaussRational& operator*=(const Rational& o) {
    re_ *= o;
    im_ *= o;
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    Rational den = o.norm();
    Rational r = (re_ * o.re_ + im_ * o.im_) / den;
    im_ = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(r);
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator*(GaussRational a, const Rational& b) { return a *= b; }
  friend GaussRational operator*(const Rational& b, GaussRational a) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

 private:
  Rational re_{0};
  Rational im_{0};
};

using Complex = std::complex<double>;

enum class Field { kRational, kGaussianRational, kF64, kC64 };

const char* field_name(Field f);
Field parse_field(std::string_view name);

/// Parses "3/2", "-4", "0.25" into an exact rational.
Rational parse_rational(std::string_view text);
/// Parses "1/2+1/3i", "i", "-2i", "3" into an exact Gaussian rational.
GaussRational parse_gauss_rational(std::string_view text);
std::string to_string(const Rational& v);
std::string to_string(const GaussRational& v);

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  using Real = Rational;
  using ComplexType = GaussRational;
  static constexpr bool kExact = true;
  static constexpr bool kComplex = false;
  static constexpr Field kField = Field::kRational;
  static Rational from_ratio(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static double magnitude(const Rational& v) { return std::fabs(v.get_d()); }
  static Rational conj(const Rational& v) { return v; }
  static double to_double(const Rational& v) { return v.get_d(); }
};

template <>
struct ScalarTraits<GaussRational> {
  using Real = Rational;
  using ComplexType = GaussRational;
  static constexpr bool kExact = true;
  static constexpr bool kComplex = true;
  static constexpr Field kField = Field::kGaussianRational;
  static GaussRational from_ratio(long num, long den = 1) {
    return GaussRational(ScalarTraits<Rational>::from_ratio(num, den));
  }
  static bool is_zero(const GaussRational& v) { return v.is_zero(); }
  static double magnitude(const GaussRational& v) {
    return std::hypot(v.real().get_d(), v.imag().get_d());
  }
  static GaussRational conj(const GaussRational& v) { return v.conj(); }
};

template <>
struct ScalarTraits<double> {
  using Real = double;
  using ComplexType = Complex;
  static constexpr bool kExact = false;
  static constexpr bool kComplex = false;
  static constexpr Field kField = Field::kF64;
  static double from_ratio(long num, long den = 1) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static bool is_zero(double v) { return v == 0.0; }
  static double magnitude(double v) { return std::fabs(v); }
  static double conj(double v) { return v; }
  static double to_double(double v) { return v; }
};

template <>
struct ScalarTraits<Complex> {
  using Real = double;
  using ComplexType = Complex;
  static constexpr bool kExact = false;
  static constexpr bool kComplex = true;
  static constexpr Field kField = Field::kC64;
  static Complex from_ratio(long num, long den = 1) {
    return {ScalarTraits<double>::from_ratio(num, den), 0.0};
  }
  static bool is_zero(const Complex& v) { return v == Complex{}; }
  static double magnitude(const Complex& v) { return std::abs(v); }
  static Complex conj(const Complex& v) { return std::conj(v); }
};

template <typename T>
concept RealScalar = !ScalarTraits<T>::kComplex;

template <typename T>
using ComplexOf = typename ScalarTraits<T>::ComplexType;

inline constexpr double kDefaultTolerance = 1e-10;

/// Tolerance actually applied to residuals: exact fields compare for equality.
template <typename T>
double effective_tolerance(double requested) {
  return ScalarTraits<T>::kExact ? 0.0 : requested;
}

}  // namespace curv
