#include "curvature/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "curvature/linalg.hpp"

namespace curv {

BlockSplit::BlockSplit(int d1_, int d2_) : d1(d1_), d2(d2_) {
  if (d1 < 1 || d2 < 1) throw Error(ErrorCode::kInvalidDimension, "split blocks must be nonempty");
}

const char* verdict_name(SteinVerdict v) {
  switch (v) {
    case SteinVerdict::kEinstein: return "einstein";
    case SteinVerdict::kTwoStein: return "two_stein";
    case SteinVerdict::kNeither: return "neither";
  }
  return "unknown";
}

namespace {

template <typename T>
bool within(const T& residual, double tol) {
  if constexpr (ScalarTraits<T>::kExact) {
    return ScalarTraits<T>::is_zero(residual);
  } else {
    return ScalarTraits<T>::magnitude(residual) <= tol;
  }
}

template <typename T>
void require_real() {
  if constexpr (ScalarTraits<T>::kComplex)
    throw Error(ErrorCode::kUnsupportedField, "check requires a real field");
}

// Number of distinct orderings of a sorted 4-tuple.
long multiplicity(const Index4& s) {
  long m = 24;
  int run = 1;
  for (int p = 1; p <= 4; ++p) {
    if (p < 4 && s[p] == s[p - 1]) {
      ++run;
    } else {
      for (int f = 2; f <= run; ++f) m /= f;
      run = 1;
    }
  }
  return m;
}

// Polarization of ||X||^4 at (a,b,c,d).
int norm4_polarization_times3(int a, int b, int c, int d) {
  return (a == b && c == d) + (a == c && b == d) + (a == d && b == c);
}

template <typename T>
CurvatureTensor<double> to_f64(const CurvatureTensor<T>& t) {
  std::vector<double> d(t.dense().size());
  for (size_t m = 0; m < d.size(); ++m) d[m] = ScalarTraits<T>::to_double(t.dense()[m]);
  return CurvatureTensor<double>::from_dense(t.dim(), std::move(d));
}

}  // namespace

template <typename T>
EinsteinDeficit<T> einstein_deficit(const CurvatureTensor<T>& t) {
  require_real<T>();
  const auto rho = ricci(t);
  const int n = t.dim();
  T lambda = rho.matrix.trace() / T(n);
  double deficit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      T d = rho(u, v) - (u == v ? lambda : T(0));
      deficit = std::max(deficit, ScalarTraits<T>::magnitude(d));
    }
  return {lambda, deficit};
}

template <typename T>
T jacobi_square_trace(const CurvatureTensor<T>& t, std::span<const T> x) {
  return jacobi(t, x).trace_of_square();
}

template <typename T>
QuarticPolarization<T>::QuarticPolarization(const CurvatureTensor<T>& t) : t_(t) {}

template <typename T>
T QuarticPolarization<T>::gram(int k, int l, int kp, int lp) {
  const int n = t_.dim();
  T acc(0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const T& a = t_(u, k, v, l);
      if (ScalarTraits<T>::is_zero(a)) continue;
      const T& b = t_(u, kp, v, lp);
      if (!ScalarTraits<T>::is_zero(b)) acc += a * b;
    }
  return acc;
}

template <typename T>
T QuarticPolarization<T>::operator()(int a, int b, int c, int d) {
  Index4 idx{a, b, c, d};
  std::sort(idx.begin(), idx.end());
  // Average of the Gram form over the distinct orderings.
  T acc(0);
  long count = 0;
  do {
    acc += gram(idx[0], idx[1], idx[2], idx[3]);
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return acc / T(count);
}

template <typename T>
SteinCertificate<T> two_stein_certificate(const CurvatureTensor<T>& t, double tolerance) {
  require_real<T>();
  const double tol = effective_tolerance<T>(tolerance);
  const int n = t.dim();
  SteinCertificate<T> cert{T(0), T(0)};

  const auto einstein = einstein_deficit(t);
  cert.residual1 = einstein.deficit;
  const bool deg2_ok = cert.residual1 <= tol;
  if (deg2_ok) {
    cert.f1 = einstein.lambda;
  } else {
    // least squares: <rho, I> / <I, I>
    cert.f1 = ricci(t).matrix.trace() / T(n);
  }

  QuarticPolarization<T> pol(t);
  std::map<Index4, T> values;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c)
        for (int d = c; d < n; ++d) values.emplace(Index4{a, b, c, d}, pol(a, b, c, d));

  T diag(0);
  for (int a = 0; a < n; ++a) diag += values.at({a, a, a, a});
  T f2 = diag / T(n);

  auto max_defect = [&](const T& f) {
    double worst = 0;
    for (const auto& [idx, v] : values) {
      T expected = f * T(norm4_polarization_times3(idx[0], idx[1], idx[2], idx[3])) / T(3);
      worst = std::max(worst, ScalarTraits<T>::magnitude(T(v - expected)));
    }
    return worst;
  };
  cert.residual2 = max_defect(f2);
  const bool deg4_ok = cert.residual2 <= tol;
  if (!deg4_ok) {
    T num(0), den(0);
    for (const auto& [idx, v] : values) {
      T s = T(norm4_polarization_times3(idx[0], idx[1], idx[2], idx[3])) / T(3);
      T m(multiplicity(idx));
      num += m * v * s;
      den += m * s * s;
    }
    f2 = num / den;
  }
  cert.f2 = f2;
  cert.certifying = deg2_ok && deg4_ok;
  cert.verdict = cert.certifying ? SteinVerdict::kTwoStein
                 : deg2_ok       ? SteinVerdict::kEinstein
                                 : SteinVerdict::kNeither;
  return cert;
}

template <typename T>
T frame_sum(const CurvatureTensor<T>& t, std::span<const T> x, std::span<const T> y) {
  const int n = t.dim();
  // p[m][w][k] = sum_i x_i R(i, m, k, w)
  std::vector<T> p(static_cast<size_t>(n) * n * n, T(0));
  for (int i = 0; i < n; ++i) {
    if (ScalarTraits<T>::is_zero(x[i])) continue;
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (int w = 0; w < n; ++w) {
          const T& r = t(i, m, k, w);
          if (!ScalarTraits<T>::is_zero(r)) p[(static_cast<size_t>(m) * n + w) * n + k] += x[i] * r;
        }
  }
  T acc(0);
  for (int m = 0; m < n; ++m)
    for (int w = 0; w < n; ++w) {
      T mx(0), my(0);
      for (int k = 0; k < n; ++k) {
        const T& v = p[(static_cast<size_t>(m) * n + w) * n + k];
        if (ScalarTraits<T>::is_zero(v)) continue;
        mx += x[k] * v;
        my += y[k] * v;
      }
      acc += mx * my;
    }
  return acc;
}

template <typename T>
T hc2_residual(const CurvatureTensor<T>& r, std::span<const T> x, std::span<const T> y,
               double tolerance) {
  require_real<T>();
  const int n = r.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw Error(ErrorCode::kInvalidDimension, "vector length != dim");
  const double tol = effective_tolerance<T>(tolerance);
  if (!within(T(dot(x, x) - T(1)), tol) || !within(T(dot(y, y) - T(1)), tol) ||
      !within(dot(x, y), tol))
    throw PreconditionError("unit_orthogonal", "hc2 needs unit, orthogonal X and Y");
  return frame_sum(r, x, y) - T(2) * ricci(r).evaluate(x, y);
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> orthonormal_pair(int n, Rng& rng) {
  const Matrix<T> q = random_orthogonal<T>(n, rng);
  std::vector<T> x(n), y(n);
  for (int r = 0; r < n; ++r) {
    x[r] = q(r, 0);
    y[r] = q(r, 1);
  }
  return {std::move(x), std::move(y)};
}

template <typename T>
ShiftEquivalenceReport<T> shift_equivalence_check(const CurvatureTensor<T>& r, int samples,
                                                  std::uint64_t seed, double tolerance) {
  require_real<T>();
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  const double tol = effective_tolerance<T>(tolerance);
  const auto cr = shift(r);
  ShiftEquivalenceReport<T> rep{};
  rep.samples = samples;
  rep.seed = seed;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const auto [x, y] = orthonormal_pair<T>(r.dim(), rng);
    const T hc2 = hc2_residual<T>(r, x, y, tolerance);
    const T shifted = frame_sum<T>(cr, x, y);
    rep.identity_max_defect =
        std::max(rep.identity_max_defect, ScalarTraits<T>::magnitude(T(shifted - hc2)));
    rep.hc2_max_residual = std::max(rep.hc2_max_residual, ScalarTraits<T>::magnitude(hc2));
  }
  const auto cert = two_stein_certificate(cr, tolerance);
  rep.shifted_h = cert.f2;
  rep.shifted_residual2 = cert.residual2;
  rep.identity_holds = rep.identity_max_defect <= tol;
  rep.hc2_holds = rep.hc2_max_residual <= tol;
  rep.shifted_two_stein = rep.shifted_residual2 <= tol;
  rep.consistent = rep.hc2_holds == rep.shifted_two_stein;
  return rep;
}

template <typename T>
TraceDerivative<T> trace_derivative_identity(const CurvatureTensor<T>& cr, std::span<const T> x,
                                             std::span<const T> y, double step) {
  require_real<T>();
  if (std::all_of(x.begin(), x.end(), [](const T& v) { return ScalarTraits<T>::is_zero(v); }))
    throw PreconditionError("nonzero_x", "trace derivative needs X != 0");
  const T symbolic = T(4) * frame_sum(cr, x, y);
  const auto f64 = to_f64(cr);
  const int n = cr.dim();
  std::vector<double> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    const double xi = ScalarTraits<T>::to_double(x[i]);
    const double yi = ScalarTraits<T>::to_double(y[i]);
    plus[i] = xi + step * yi;
    minus[i] = xi - step * yi;
  }
  const double fd = (jacobi_square_trace<double>(f64, plus) - jacobi_square_trace<double>(f64, minus)) /
                    (2.0 * step);
  return {symbolic, fd};
}

template <typename T>
double block_condition_residual(const CurvatureTensor<T>& t, const BlockSplit& split) {
  if (split.n() != t.dim()) throw Error(ErrorCode::kInvalidDimension, "split does not match dim");
  const int n = t.dim();
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const int ones = split.in_w1(i) + split.in_w1(j) + split.in_w1(k) + split.in_w1(l);
          const bool forbidden =
              ones == 1 || ones == 3 || (ones == 2 && split.in_w1(i) == split.in_w1(j));
          if (forbidden) worst = std::max(worst, ScalarTraits<T>::magnitude(t(i, j, k, l)));
        }
  return worst;
}

template <typename T>
double mixed_pair_asymmetry(const CurvatureTensor<T>& t, const BlockSplit& split) {
  if (split.n() != t.dim()) throw Error(ErrorCode::kInvalidDimension, "split does not match dim");
  double worst = 0;
  for (int i = 0; i < split.d1; ++i)
    for (int j = 0; j < split.d1; ++j)
      for (int a = split.d1; a < split.n(); ++a)
        for (int b = split.d1; b < split.n(); ++b)
          worst = std::max(worst, ScalarTraits<T>::magnitude(T(t(i, a, j, b) - t(i, b, j, a))));
  return worst;
}

#define CURV_INSTANTIATE_REAL(T)                                                                  \
  template EinsteinDeficit<T> einstein_deficit<T>(const CurvatureTensor<T>&);                     \
  template class QuarticPolarization<T>;                                                          \
  template SteinCertificate<T> two_stein_certificate<T>(const CurvatureTensor<T>&, double);       \
  template T hc2_residual<T>(const CurvatureTensor<T>&, std::span<const T>, std::span<const T>,   \
                             double);                                                             \
  template std::pair<std::vector<T>, std::vector<T>> orthonormal_pair<T>(int, Rng&);              \
  template ShiftEquivalenceReport<T> shift_equivalence_check<T>(const CurvatureTensor<T>&, int,   \
                                                                std::uint64_t, double);           \
  template TraceDerivative<T> trace_derivative_identity<T>(                                       \
      const CurvatureTensor<T>&, std::span<const T>, std::span<const T>, double);

#define CURV_INSTANTIATE_ANY(T)                                                                   \
  template T jacobi_square_trace<T>(const CurvatureTensor<T>&, std::span<const T>);               \
  template T frame_sum<T>(const CurvatureTensor<T>&, std::span<const T>, std::span<const T>);     \
  template double block_condition_residual<T>(const CurvatureTensor<T>&, const BlockSplit&);      \
  template double mixed_pair_asymmetry<T>(const CurvatureTensor<T>&, const BlockSplit&);

CURV_INSTANTIATE_REAL(Rational)
CURV_INSTANTIATE_REAL(double)
CURV_INSTANTIATE_ANY(Rational)
CURV_INSTANTIATE_ANY(GaussRational)
CURV_INSTANTIATE_ANY(double)
CURV_INSTANTIATE_ANY(Complex)

}  // namespace curv
