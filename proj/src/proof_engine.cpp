#include "curvature/proof_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvature/json_scalar.hpp"
#include "curvature/linalg.hpp"
#include "curvature/random.hpp"

namespace curv {

namespace {

using nlohmann::json;

template <typename T>
T from_long(long v) {
  return ScalarTraits<T>::from_ratio(v);
}

template <typename T>
bool is_zero(const T& v) {
  return ScalarTraits<T>::is_zero(v);
}

template <typename T>
double mag(const T& v) {
  return ScalarTraits<T>::magnitude(v);
}

template <typename T>
bool within(const T& residual, double tol) {
  if constexpr (ScalarTraits<T>::kExact) {
    return is_zero(residual);
  } else {
    return mag(residual) <= tol;
  }
}

// Relative comparison for floats, equality for exact fields.
template <typename T>
bool agree(const T& a, const T& b, double tol) {
  if constexpr (ScalarTraits<T>::kExact) {
    return a == b;
  } else {
    return mag(T(a - b)) <= tol * std::max(1.0, std::max(mag(a), mag(b)));
  }
}

Rational frac(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

template <typename C>
C imaginary_unit() {
  if constexpr (ScalarTraits<C>::kExact) {
    return C::i();
  } else {
    return C(0.0, 1.0);
  }
}

template <typename T>
ComplexOf<T> lift(const T& v) {
  return ComplexOf<T>(v);
}

template <typename T>
void require_real() {
  if constexpr (ScalarTraits<T>::kComplex)
    throw Error(ErrorCode::kUnsupportedField, "operation requires a real field");
}

template <typename T>
void require_block(const CurvatureTensor<T>& cr, const BlockSplit& split, double tol) {
  if (split.n() != cr.dim()) throw Error(ErrorCode::kInvalidDimension, "split does not match dim");
  const double r = block_condition_residual(cr, split);
  if (r > effective_tolerance<T>(tol))
    throw PreconditionError("block_condition",
                            "block condition fails: residual " + std::to_string(r));
}

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

// Sorted run lengths of a sorted index list, e.g. {i,i,j,j} -> {2,2}.
std::vector<int> run_pattern(const std::vector<int>& sorted) {
  std::vector<int> runs;
  for (size_t p = 0; p < sorted.size(); ++p) {
    if (p > 0 && sorted[p] == sorted[p - 1]) {
      ++runs.back();
    } else {
      runs.push_back(1);
    }
  }
  std::sort(runs.rbegin(), runs.rend());
  return runs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Symmetric functions and Z-vectors

template <typename C>
std::array<C, 4> elementary_symmetric(std::span<const C> v) {
  std::array<C, 5> e{};
  e[0] = C(1);
  for (const C& x : v)
    for (int h = 4; h >= 1; --h) e[h] += e[h - 1] * x;
  return {e[1], from_long<C>(2) * e[2], from_long<C>(6) * e[3], from_long<C>(24) * e[4]};
}

template <typename C>
ZVector<C>::ZVector(BlockSplit split, std::vector<C> x, std::vector<C> y)
    : split_(split), x_(std::move(x)), y_(std::move(y)) {
  if (static_cast<int>(x_.size()) != split_.d1 || static_cast<int>(y_.size()) != split_.d2)
    throw Error(ErrorCode::kInvalidDimension, "ZVector block lengths do not match split");
  auto nonzero = [](const std::vector<C>& v) {
    return std::count_if(v.begin(), v.end(), [](const C& c) { return !is_zero(c); });
  };
  if (nonzero(x_) > 2 || nonzero(y_) > 2)
    throw Error(ErrorCode::kInvalidArgument, "ZVector allows at most two nonzero entries per block");
  sigma_x_ = elementary_symmetric<C>(x_);
  sigma_y_ = elementary_symmetric<C>(y_);
}

template <typename C>
std::vector<C> ZVector<C>::coordinates() const {
  std::vector<C> out(x_);
  out.insert(out.end(), y_.begin(), y_.end());
  return out;
}

template <typename C>
ZVector<C> ZVector<C>::scaled(const C& t) const {
  std::vector<C> x(x_), y(y_);
  for (auto& v : x) v *= t;
  for (auto& v : y) v *= t;
  return {split_, std::move(x), std::move(y)};
}

template <typename C>
const std::array<const char*, 10>& CoefficientVector10<C>::names() {
  static const std::array<const char*, 10> kNames = {"A1", "A2", "A3", "B1", "B2",
                                                     "B3", "C1", "C2", "C3", "C4"};
  return kNames;
}

long factorial_or_zero(int m) {
  if (m < 0) return 0;
  long f = 1;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

template <typename C>
CoefficientVector10<C> abc_coefficients(const ZVector<C>& x) {
  const int d1 = x.split().d1;
  const int d2 = x.split().d2;
  const C half = ScalarTraits<C>::from_ratio(1, 2);
  const C two = from_long<C>(2);
  const C four = from_long<C>(4);
  auto f = [](int m) { return from_long<C>(factorial_or_zero(m)); };

  // e2 is the unordered second symmetric function x1 x2.
  const C s1x = x.sigma_x()[0];
  const C e2x = x.sigma_x()[1] * half;
  const C s1y = x.sigma_y()[0];
  const C e2y = x.sigma_y()[1] * half;
  const C nx = s1x * s1x - two * e2x;
  const C ny = s1y * s1y - two * e2y;

  CoefficientVector10<C> out;
  out.a(1) = f(d1 - 1) * f(d2) * (s1x * s1x * s1x * s1x - four * s1x * s1x * e2x + two * e2x * e2x);
  out.a(2) = f(d1 - 2) * f(d2) * (s1x * s1x * e2x - two * e2x * e2x);
  out.a(3) = f(d1 - 2) * f(d2) * (two * e2x * e2x);
  out.b(1) = f(d2 - 1) * f(d1) * (s1y * s1y * s1y * s1y - four * s1y * s1y * e2y + two * e2y * e2y);
  out.b(2) = f(d2 - 2) * f(d1) * (s1y * s1y * e2y - two * e2y * e2y);
  out.b(3) = f(d2 - 2) * f(d1) * (two * e2y * e2y);
  out.c(1) = f(d1 - 1) * f(d2 - 1) * two * nx * ny;
  out.c(2) = f(d1 - 1) * f(d2 - 2) * four * nx * e2y;
  out.c(3) = f(d1 - 2) * f(d2 - 1) * four * e2x * ny;
  out.c(4) = f(d1 - 2) * f(d2 - 2) * four * e2x * e2y;
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient forms

template <typename T>
FormLedger<T> coefficient_forms(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                double tolerance) {
  require_real<T>();
  require_block(cr, split, tolerance);
  const int n = cr.dim();
  const T half = ScalarTraits<T>::from_ratio(1, 2);
  FormLedger<T> ledger;
  QuarticPolarization<T> pol(cr);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c)
        for (int d = c; d < n; ++d) {
          const Index4 s{a, b, c, d};
          const T coef = pol(a, b, c, d) * from_long<T>(multiplicity(s));
          if (is_zero(coef)) continue;
          ledger.monomials[s] = coef;

          std::vector<int> xs, ys;
          for (int idx : s) (split.in_w1(idx) ? xs : ys).push_back(idx);
          if (ys.size() % 2 == 1) {
            if (!within(coef, tolerance))
              throw Error(ErrorCode::kIdentityViolation,
                          "odd-degree monomial in the W2 variables; block structure broken");
            continue;
          }
          if (xs.size() == 4 || ys.size() == 4) {
            const auto runs = run_pattern(xs.size() == 4 ? xs : ys);
            int h = 0;
            if (runs == std::vector<int>{4}) h = 1;
            else if (runs == std::vector<int>{3, 1}) h = 2;
            else if (runs == std::vector<int>{2, 2}) h = 3;
            else if (runs == std::vector<int>{2, 1, 1}) h = 4;
            else h = 5;
            (xs.size() == 4 ? ledger.p : ledger.q)[h] += coef;
          } else {
            const bool x_square = xs[0] == xs[1];
            const bool y_square = ys[0] == ys[1];
            if (x_square && y_square) ledger.s[1] += coef * half;
            else if (x_square) ledger.s[2] += coef * half;
            else if (y_square) ledger.s[3] += coef * half;
            else ledger.s[4] += coef;
          }
        }
  return ledger;
}

template <typename T>
PublishedForms<T> published_forms(const CurvatureTensor<T>& cr, const BlockSplit& split) {
  require_real<T>();
  if (split.n() != cr.dim()) throw Error(ErrorCode::kInvalidDimension, "split does not match dim");
  const int d1 = split.d1;
  const int n = split.n();
  const T two = from_long<T>(2);
  PublishedForms<T> f{T(0), T(0), T(0), T(0), T(0)};

  // P1, P3 over W1 = [0, d1); Q1, Q3 are the same expressions with the blocks exchanged.
  auto forms = [&](int lo1, int hi1, int lo2, int hi2, T& first, T& third) {
    for (int i = lo1; i < hi1; ++i) {
      for (int k = lo1; k < hi1; ++k)
        for (int l = lo1; l < hi1; ++l) first += cr(i, k, i, l) * cr(i, k, i, l);
      for (int a = lo2; a < hi2; ++a)
        for (int b = lo2; b < hi2; ++b) first += cr(i, a, i, b) * cr(i, a, i, b);
    }
    for (int i = lo1; i < hi1; ++i)
      for (int j = lo1; j < hi1; ++j) {
        if (i == j) continue;
        for (int k = lo1; k < hi1; ++k)
          for (int l = lo1; l < hi1; ++l)
            third += cr(i, k, i, l) * cr(j, k, j, l) + cr(i, k, j, l) * cr(i, k, j, l) +
                     cr(i, k, j, l) * cr(j, k, i, l);
        for (int a = lo2; a < hi2; ++a)
          for (int b = lo2; b < hi2; ++b)
            third += cr(i, a, i, b) * cr(j, a, j, b) + two * cr(i, a, j, b) * cr(i, a, j, b);
      }
  };
  forms(0, d1, d1, n, f.p1, f.p3);
  forms(d1, n, 0, d1, f.q1, f.q3);

  for (int i = 0; i < d1; ++i)
    for (int a = d1; a < n; ++a) {
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d1; ++l) f.s1 += cr(i, k, i, l) * cr(a, k, a, l);
      for (int c = d1; c < n; ++c)
        for (int d = d1; d < n; ++d) f.s1 += cr(i, c, i, d) * cr(a, c, a, d);
      for (int k = 0; k < d1; ++k)
        for (int c = d1; c < n; ++c) f.s1 += cr(a, k, i, c) * cr(a, k, i, c);
    }
  return f;
}

// ---------------------------------------------------------------------------
// Symmetrized trace

template <typename T>
ComplexOf<T> complex_square_trace(const CurvatureTensor<T>& cr, std::span<const ComplexOf<T>> x) {
  using C = ComplexOf<T>;
  const int n = cr.dim();
  if (static_cast<int>(x.size()) != n) throw Error(ErrorCode::kInvalidDimension, "vector length");
  std::vector<int> nz;
  for (int k = 0; k < n; ++k)
    if (!is_zero(x[k])) nz.push_back(k);
  C total(0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      C m(0);
      for (int k : nz)
        for (int l : nz) {
          const T& r = cr(u, k, v, l);
          if (!is_zero(r)) m += x[k] * x[l] * lift(r);
        }
      total += m * m;
    }
  return total;
}

template <typename T>
ComplexOf<T> symmetrized_trace_direct(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                      const ZVector<ComplexOf<T>>& x) {
  using C = ComplexOf<T>;
  require_real<T>();
  require_block(cr, split, kDefaultTolerance);
  const int d1 = split.d1;
  const int d2 = split.d2;
  long count = 1;
  for (int k = 2; k <= std::max(d1, d2); ++k) {
    if (k <= d1) count *= k;
    if (k <= d2) count *= k;
    if (count > kPermutationGuard)
      throw Error(ErrorCode::kCombinatorialGuard, "d1! d2! exceeds the permutation guard");
  }

  std::vector<int> nzx, nzy;
  for (int i = 0; i < d1; ++i)
    if (!is_zero(x.x()[i])) nzx.push_back(i);
  for (int a = 0; a < d2; ++a)
    if (!is_zero(x.y()[a])) nzy.push_back(a);

  std::vector<int> p1(d1), p2(d2);
  std::iota(p1.begin(), p1.end(), 0);
  std::map<std::vector<int>, C> memo;
  C total(0);
  std::vector<int> key;
  do {
    std::iota(p2.begin(), p2.end(), 0);
    do {
      key.clear();
      for (int i : nzx) key.push_back(p1[i]);
      for (int a : nzy) key.push_back(p2[a]);
      auto it = memo.find(key);
      if (it == memo.end()) {
        std::vector<C> coords(split.n(), C(0));
        for (int i : nzx) coords[p1[i]] = x.x()[i];
        for (int a : nzy) coords[d1 + p2[a]] = x.y()[a];
        it = memo.emplace(key, complex_square_trace<T>(cr, coords)).first;
      }
      total += it->second;
    } while (std::next_permutation(p2.begin(), p2.end()));
  } while (std::next_permutation(p1.begin(), p1.end()));
  return total;
}

template <typename T>
ComplexOf<T> symmetrized_trace_formula(const FormLedger<T>& ledger,
                                       const CoefficientVector10<ComplexOf<T>>& k) {
  ComplexOf<T> total(0);
  for (int h = 1; h <= 3; ++h) {
    total += k.a(h) * lift(ledger.p[h]);
    total += k.b(h) * lift(ledger.q[h]);
  }
  for (int h = 1; h <= 4; ++h) total += k.c(h) * lift(ledger.s[h]);
  return total;
}

template <typename T>
ComplexOf<T> symmetrized_trace_formula(const FormLedger<T>& ledger, const ZVector<ComplexOf<T>>& x) {
  return symmetrized_trace_formula<T>(ledger, abc_coefficients(x));
}

template <typename C>
C rhs_linear_form(const BlockSplit& split, const CoefficientVector10<C>& k, const C& h) {
  const long d1 = split.d1;
  const long d2 = split.d2;
  return h * (from_long<C>(d1) * k.a(1) + from_long<C>(d1 * (d1 - 1)) * k.a(3) +
              from_long<C>(d2) * k.b(1) + from_long<C>(d2 * (d2 - 1)) * k.b(3) +
              from_long<C>(d1 * d2) * k.c(1));
}

template <typename C>
C rhs_identity_value(const ZVector<C>& x, const C& h) {
  const C value = rhs_linear_form(x.split(), abc_coefficients(x), h);
  C nx(0), ny(0);
  for (const C& v : x.x()) nx += v * v;
  for (const C& v : x.y()) ny += v * v;
  const C closed = h *
                   from_long<C>(factorial_or_zero(x.split().d1) * factorial_or_zero(x.split().d2)) *
                   (nx + ny) * (nx + ny);
  if (!agree(value, closed, 1e-9))
    throw Error(ErrorCode::kIdentityViolation,
                "H d1! d2! ||X||^4 disagrees with the coefficient expression");
  return value;
}

// ---------------------------------------------------------------------------
// Vector-set solver

template <typename C>
std::vector<C> fourth_power_decomposition(const C& w) {
  if (is_zero(w)) return {};
  if constexpr (!ScalarTraits<C>::kExact) {
    return {std::pow(w, 0.25)};
  } else {
    if (w == C(1)) return {C(1)};
    // (x+3)^4 - 3(x+2)^4 + 3(x+1)^4 - x^4 = 24x + 36, and -s^4 = 4((1+i)s/2)^4.
    const C x = (w - C(36)) / C(24);
    const C rot = C(frac(1, 2), frac(1, 2));
    std::vector<C> out;
    auto add = [&](const C& t, int copies) {
      if (is_zero(t)) return;
      for (int c = 0; c < copies; ++c) out.push_back(t);
    };
    add(x + C(3), 1);
    add(x + C(1), 3);
    add(rot * (x + C(2)), 12);
    add(rot * x, 4);
    C check(0);
    for (const C& t : out) check += t * t * t * t;
    if (!(check == w)) throw Error(ErrorCode::kInternal, "fourth-power decomposition failed");
    return out;
  }
}

template <typename C>
VectorSet<C> solve_vector_set(const CoefficientVector10<C>& targets, const BlockSplit& split) {
  const int d1 = split.d1;
  const int d2 = split.d2;
  const std::array<bool, 10> active = {true,    d1 >= 2, d1 >= 2, true,    d2 >= 2,
                                       d2 >= 2, true,    d2 >= 2, d1 >= 2, d1 >= 2 && d2 >= 2};
  for (int m = 0; m < 10; ++m)
    if (!active[m] && !is_zero(targets.values[m]))
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("target ") + CoefficientVector10<C>::names()[m] +
                      " is unreachable for this split");

  VectorSet<C> set{split, {}, {}};
  if (std::all_of(targets.values.begin(), targets.values.end(),
                  [](const C& v) { return is_zero(v); }))
    return set;

  std::vector<int> rows;
  for (int m = 0; m < 10; ++m)
    if (active[m]) rows.push_back(m);
  const int r = static_cast<int>(rows.size());

  // Greedy selection of probe points over small Gaussian integers.
  const std::array<std::pair<int, int>, 9> pool = {
      {{0, 0}, {1, 0}, {-1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, -1}, {3, 0}, {1, -2}}};
  auto pick = [&](Rng& rng) {
    const auto& [re, im] = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    return C(from_long<C>(re) + from_long<C>(im) * imaginary_unit<C>());
  };
  Rng rng(derive_seed(0x7a5e7, static_cast<std::uint64_t>(d1 * 64 + d2)));
  std::vector<ZVector<C>> probes;
  std::vector<CoefficientVector10<C>> columns;
  for (int attempt = 0; attempt < 20000 && static_cast<int>(probes.size()) < r; ++attempt) {
    std::vector<C> x(d1, C(0)), y(d2, C(0));
    x[0] = pick(rng);
    if (d1 >= 2) x[1] = pick(rng);
    y[0] = pick(rng);
    if (d2 >= 2) y[1] = pick(rng);
    ZVector<C> z(split, x, y);
    const auto col = abc_coefficients(z);
    Matrix<C> m(r, static_cast<int>(columns.size()) + 1);
    for (int row = 0; row < r; ++row) {
      for (size_t c = 0; c < columns.size(); ++c) m(row, static_cast<int>(c)) = columns[c].values[rows[row]];
      m(row, static_cast<int>(columns.size())) = col.values[rows[row]];
    }
    if (rank_exact(m) == static_cast<int>(columns.size()) + 1) {
      probes.push_back(z);
      columns.push_back(col);
    }
  }
  if (static_cast<int>(probes.size()) < r)
    throw Error(ErrorCode::kInternal, "could not find a full-rank probe system");

  Matrix<C> a(r, r);
  std::vector<C> b(r);
  for (int row = 0; row < r; ++row) {
    for (int c = 0; c < r; ++c) a(row, c) = columns[c].values[rows[row]];
    b[row] = targets.values[rows[row]];
  }
  const std::vector<C> weights = solve_exact(a, b);
  for (int c = 0; c < r; ++c)
    for (const C& t : fourth_power_decomposition(weights[c])) {
      set.vectors.push_back(probes[c].scaled(t));
      set.aggregate += abc_coefficients(set.vectors.back());
    }
  for (int m = 0; m < 10; ++m)
    if (!agree(set.aggregate.values[m], targets.values[m], 1e-8))
      throw Error(ErrorCode::kInternal, "vector set does not reproduce the target");
  return set;
}

// ---------------------------------------------------------------------------
// Weights and the final quadratic form

bool WeightPair::admissible(int d1, int d2, const Rational& xi, const Rational& eta) {
  const Rational mu = (d2 - 1) * eta + (d2 - d1 - 1) * xi;
  const Rational nu = (d1 - 1) * xi + (d1 - d2 - 1) * eta;
  return sgn(xi) > 0 && sgn(eta) > 0 && sgn(mu) > 0 && sgn(nu) > 0 &&
         sgn(Rational((d1 - d2 - 2) * eta + d1 * xi)) >= 0 &&
         sgn(Rational((d2 - d1 - 2) * xi + d2 * eta)) >= 0;
}

WeightPair select_xi_eta(int d1, int d2) {
  if (d1 < 2 || d2 < d1 || d1 + d2 < 5)
    throw PreconditionError("weight_domain", "weights need 2 <= d1 <= d2 and d1 + d2 >= 5");
  Rational xi(1);
  const Rational eta(1);
  if (d2 >= d1 + 2) {
    xi = std::max(frac(d2 - d1 + 1, d1 - 1), frac(d2 - d1 + 2, d1)) + 1;
  } else if (d2 == d1 + 1) {
    const Rational lo = std::max(frac(2, d1 - 1), frac(3, d1));
    xi = (lo + (d1 + 1)) / 2;
  }
  xi.canonicalize();
  if (!WeightPair::admissible(d1, d2, xi, eta))
    throw Error(ErrorCode::kInternal, "selected weights violate the positivity conditions");
  WeightPair w{xi, eta, (d2 - 1) * eta + (d2 - d1 - 1) * xi, (d1 - 1) * xi + (d1 - d2 - 1) * eta};
  w.mu.canonicalize();
  w.nu.canonicalize();
  return w;
}

template <typename C>
CoefficientVector10<C> case2_targets(int d1, int d2, const WeightPair& w) {
  CoefficientVector10<C> t;
  t.a(3) = from_rational<C>(w.xi);
  t.b(3) = from_rational<C>(w.eta);
  t.c(1) = from_rational<C>(Rational(-2 * (w.xi + w.eta)));
  t.a(1) = from_rational<C>(Rational((d2 - d1 + 1) * w.xi + d2 * w.eta));
  t.b(1) = from_rational<C>(Rational((d1 - d2 + 1) * w.eta + d1 * w.xi));
  return t;
}

template <typename T>
QuadDecomposition<T> final_quadratic_form(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                          const WeightPair& w, double tolerance) {
  require_real<T>();
  require_block(cr, split, tolerance);
  const int d1 = split.d1;
  const int d2 = split.d2;
  const int n = split.n();
  if (d1 < 2 || d2 < 2) throw PreconditionError("d1_at_least_2", "both blocks need dimension >= 2");

  const T xi = from_rational<T>(w.xi);
  const T eta = from_rational<T>(w.eta);
  const T mu = from_rational<T>(w.mu);
  const T nu = from_rational<T>(w.nu);
  const T two = from_long<T>(2);
  const T half = ScalarTraits<T>::from_ratio(1, 2);
  const T a1 = from_long<T>(d2 - d1 + 1) * xi + from_long<T>(d2) * eta;
  const T b1 = from_long<T>(d1 - d2 + 1) * eta + from_long<T>(d1) * xi;
  const T sum_w = xi + eta;

  QuadDecomposition<T> q;
  const auto pf = published_forms(cr, split);
  q.total = a1 * pf.p1 + xi * pf.p3 + b1 * pf.q1 + eta * pf.q3 - two * sum_w * pf.s1;

  // Q1, Q2 over pairwise distinct indices.
  auto distinct_squares = [&](int lo, int hi) -> T {
    T s(0);
    for (int i = lo; i < hi; ++i)
      for (int j = lo; j < hi; ++j)
        for (int k = lo; k < hi; ++k)
          for (int l = lo; l < hi; ++l) {
            if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
            const T v = cr(i, k, j, l) + cr(j, k, i, l);
            s += v * v;
          }
    return s;
  };
  q.q1 = half * xi * distinct_squares(0, d1);
  q.q2 = half * eta * distinct_squares(d1, n);

  q.u_w1.assign(d1, T(0));
  q.v_w1.assign(d1, T(0));
  q.u_w2.assign(d2, T(0));
  q.v_w2.assign(d2, T(0));
  for (int k = 0; k < d1; ++k) {
    for (int i = 0; i < d1; ++i) q.u_w1[k] += cr(i, k, i, k);
    for (int a = d1; a < n; ++a) q.v_w1[k] += cr(a, k, a, k);
  }
  for (int a = 0; a < d2; ++a) {
    for (int c = d1; c < n; ++c) q.u_w2[a] += cr(c, d1 + a, c, d1 + a);
    for (int i = 0; i < d1; ++i) q.v_w2[a] += cr(i, d1 + a, i, d1 + a);
  }

  T sq_w1(0), sq_w2(0), sq_mixed(0);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) sq_w1 += cr(i, k, i, k) * cr(i, k, i, k);
  for (int a = d1; a < n; ++a)
    for (int c = d1; c < n; ++c) sq_w2 += cr(a, c, a, c) * cr(a, c, a, c);
  for (int i = 0; i < d1; ++i)
    for (int a = d1; a < n; ++a) sq_mixed += cr(i, a, i, a) * cr(i, a, i, a);

  T uu1(0), vv1(0), uv1(0), uu2(0), vv2(0), uv2(0);
  for (int k = 0; k < d1; ++k) {
    uu1 += q.u_w1[k] * q.u_w1[k];
    vv1 += q.v_w1[k] * q.v_w1[k];
    uv1 += q.u_w1[k] * q.v_w1[k];
  }
  for (int a = 0; a < d2; ++a) {
    uu2 += q.u_w2[a] * q.u_w2[a];
    vv2 += q.v_w2[a] * q.v_w2[a];
    uv2 += q.u_w2[a] * q.v_w2[a];
  }
  q.q3_raw = a1 * sq_w1 + xi * uu1 + b1 * sq_w2 + eta * uu2 + (mu + nu) * sq_mixed + xi * vv2 +
             eta * vv1 - two * sum_w * (uv1 + uv2);

  // Completed squares.
  T diff_w1(0), diff_w2(0), diff_mixed_a(0), diff_mixed_i(0);
  for (int k = 0; k < d1; ++k)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) {
        if (i == k || j == k) continue;
        const T v = cr(i, k, i, k) - cr(j, k, j, k);
        diff_w1 += v * v;
      }
  for (int a = d1; a < n; ++a)
    for (int c = d1; c < n; ++c)
      for (int d = d1; d < n; ++d) {
        if (c == a || d == a) continue;
        const T v = cr(a, c, a, c) - cr(a, d, a, d);
        diff_w2 += v * v;
      }
  for (int a = d1; a < n; ++a)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) {
        const T v = cr(i, a, i, a) - cr(j, a, j, a);
        diff_mixed_a += v * v;
      }
  for (int i = 0; i < d1; ++i)
    for (int a = d1; a < n; ++a)
      for (int b = d1; b < n; ++b) {
        const T v = cr(i, a, i, a) - cr(i, b, i, b);
        diff_mixed_i += v * v;
      }
  T tail_w1(0), tail_w2(0);
  const T inv_d1m1 = T(1) / from_long<T>(d1 - 1);
  const T inv_d2m1 = T(1) / from_long<T>(d2 - 1);
  const T inv_d1 = T(1) / from_long<T>(d1);
  const T inv_d2 = T(1) / from_long<T>(d2);
  for (int k = 0; k < d1; ++k) {
    const T v = inv_d1m1 * q.u_w1[k] - inv_d2 * q.v_w1[k];
    tail_w1 += v * v;
  }
  for (int a = 0; a < d2; ++a) {
    const T v = inv_d2m1 * q.u_w2[a] - inv_d1 * q.v_w2[a];
    tail_w2 += v * v;
  }
  q.q3 = a1 * half * inv_d1m1 * diff_w1 + b1 * half * inv_d2m1 * diff_w2 +
         mu * half * inv_d1 * diff_mixed_a + nu * half * inv_d2 * diff_mixed_i +
         sum_w * from_long<T>(d2 * (d1 - 1)) * tail_w1 +
         sum_w * from_long<T>(d1 * (d2 - 1)) * tail_w2;

  // Q4 from the two bracket families.
  const T alpha1 = from_long<T>(d2 - d1 + 4) * xi + from_long<T>(d2) * eta;
  const T beta1 = from_long<T>(d1 - d2 - 2) * eta + from_long<T>(d1) * xi;
  const T alpha2 = from_long<T>(d1 - d2 + 4) * eta + from_long<T>(d1) * xi;
  const T beta2 = from_long<T>(d2 - d1 - 2) * xi + from_long<T>(d2) * eta;
  auto bracket = [&](int ulo, int uhi, int vlo, int vhi, int p, int r, const T& alpha,
                     const T& beta, const T& wu, const T& wv) -> T {
    T su(0), sv(0), squ(0), sqv(0);
    for (int i = ulo; i < uhi; ++i) {
      const T& u = cr(i, p, i, r);
      su += u;
      squ += u * u;
    }
    for (int a = vlo; a < vhi; ++a) {
      const T& v = cr(a, p, a, r);
      sv += v;
      sqv += v * v;
    }
    return alpha * squ + beta * sqv + wu * su * su + wv * sv * sv - two * sum_w * su * sv;
  };
  q.q4_direct = T(0);
  for (int k = 0; k < d1; ++k)
    for (int l = 0; l < d1; ++l)
      if (k != l) q.q4_direct += bracket(0, d1, d1, n, k, l, alpha1, beta1, xi, eta);
  for (int c = d1; c < n; ++c)
    for (int d = d1; d < n; ++d)
      if (c != d) q.q4_direct += bracket(d1, n, 0, d1, c, d, alpha2, beta2, eta, xi);

  q.q4 = q.total - q.q1 - q.q2 - q.q3;
  q.q3_completion_exact = agree(q.q3, q.q3_raw, tolerance);
  q.q4_matches_remainder = agree(q.q4, q.q4_direct, tolerance);
  return q;
}

template <typename T>
Case1Values<T> case1_identity_check(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                    double tolerance) {
  if (split.d1 != 1) throw PreconditionError("d1_equals_1", "Case 1 needs d1 = 1");
  const auto ledger = coefficient_forms(cr, split, tolerance);
  const int n = split.n();
  Case1Values<T> out{from_long<T>(split.d2) * ledger.p[1] + ledger.q[1] - from_long<T>(2) * ledger.s[1],
                     T(0)};
  for (int a = 1; a < n; ++a)
    for (int c = 1; c < n; ++c)
      for (int d = 1; d < n; ++d) {
        if (a == c || a == d) continue;
        const T v = cr(0, c, 0, d) - cr(a, c, a, d);
        out.sum_of_squares += v * v;
      }
  return out;
}

std::pair<Matrix<Rational>, Matrix<Rational>> q4_bracket_matrices(const BlockSplit& split,
                                                                  const WeightPair& w) {
  const int d1 = split.d1;
  const int d2 = split.d2;
  const Rational& xi = w.xi;
  const Rational& eta = w.eta;
  auto build = [&](int nu_vars, int nv_vars, const Rational& alpha, const Rational& beta,
                   const Rational& wu, const Rational& wv) {
    const int m = nu_vars + nv_vars;
    Matrix<Rational> mat(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        const bool ru = r < nu_vars;
        const bool cu = c < nu_vars;
        if (ru && cu) mat(r, c) = (r == c ? alpha : Rational(0)) + wu;
        else if (!ru && !cu) mat(r, c) = (r == c ? beta : Rational(0)) + wv;
        else mat(r, c) = -(xi + eta);
      }
    return mat;
  };
  return {build(std::max(d1 - 2, 0), d2, (d2 - d1 + 4) * xi + d2 * eta,
                (d1 - d2 - 2) * eta + d1 * xi, xi, eta),
          build(std::max(d2 - 2, 0), d1, (d1 - d2 + 4) * eta + d1 * xi,
                (d2 - d1 - 2) * xi + d2 * eta, eta, xi)};
}

Q4Certificate q4_psd_witness(const BlockSplit& split, const WeightPair& w, double tolerance) {
  const int d1 = split.d1;
  const int d2 = split.d2;
  if (!WeightPair::admissible(d1, d2, w.xi, w.eta))
    throw PreconditionError("weights", "weights violate the positivity conditions");
  const Rational& xi = w.xi;
  const Rational& eta = w.eta;
  const auto [m1, m2] = q4_bracket_matrices(split, w);

  Q4Certificate cert;
  cert.min_eigenvalue_w1 = min_eigenvalue(to_double(m1));
  cert.min_eigenvalue_w2 = min_eigenvalue(to_double(m2));

  // Reduced 2x2 determinant on the normalized all-ones directions of u and v.
  auto reduced = [](const Matrix<Rational>& m, int nu_vars, int nv_vars) -> Rational {
    Rational uu(0), vv(0), uv(0);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        const bool ru = r < nu_vars;
        const bool cu = c < nu_vars;
        if (ru && cu) uu += m(r, c);
        else if (!ru && !cu) vv += m(r, c);
        else if (ru) uv += m(r, c);
      }
    return Rational(uu * vv - uv * uv) / Rational(nu_vars * nv_vars);
  };
  const Rational expected_w1 =
      ((d2 + 2) * xi + d2 * eta) * ((d1 - 2) * eta + d1 * xi) - d2 * (d1 - 2) * (xi + eta) * (xi + eta);
  const Rational expected_w2 =
      ((d2 - 2) * xi + d2 * eta) * ((d1 + 2) * eta + d1 * xi) - d1 * (d2 - 2) * (xi + eta) * (xi + eta);
  cert.determinant_w1 = d1 > 2 ? reduced(m1, d1 - 2, d2) : expected_w1;
  cert.determinant_w2 = d2 > 2 ? reduced(m2, d2 - 2, d1) : expected_w2;
  cert.closed_form_w1 = 2 * (d1 + d2) * xi * xi + 2 * (d1 + d2 - 2) * xi * eta;
  cert.closed_form_w2 = 2 * (d1 + d2) * eta * eta + 2 * (d1 + d2 - 2) * xi * eta;
  cert.determinant_w1.canonicalize();
  cert.determinant_w2.canonicalize();
  cert.closed_form_w1.canonicalize();
  cert.closed_form_w2.canonicalize();
  cert.passes = cert.min_eigenvalue_w1 >= -tolerance && cert.min_eigenvalue_w2 >= -tolerance &&
                cert.determinant_w1 == cert.closed_form_w1 && expected_w1 == cert.closed_form_w1 &&
                cert.determinant_w2 == cert.closed_form_w2 && expected_w2 == cert.closed_form_w2;
  return cert;
}

// ---------------------------------------------------------------------------
// Deduction

template <typename T>
CurvatureTensor<T> normalize_split(const CurvatureTensor<T>& t, BlockSplit& split) {
  if (split.n() != t.dim()) throw Error(ErrorCode::kInvalidDimension, "split does not match dim");
  if (split.d1 <= split.d2) return t;
  const int n = split.n();
  Matrix<T> q(n, n);
  for (int m = 0; m < n; ++m) {
    const int old = m < split.d2 ? split.d1 + m : m - split.d2;
    q(old, m) = T(1);
  }
  split = BlockSplit(split.d2, split.d1);
  return change_basis(t, q);
}

template <typename T>
Deduction<T> constant_curvature_deduction(const CurvatureTensor<T>& input, const BlockSplit& split_in,
                                          const DeductionOptions& options, json* trace) {
  require_real<T>();
  using C = ComplexOf<T>;
  const double tol = options.tolerance;
  json local;
  json& tr = trace ? *trace : local;
  if (!tr.is_object()) tr = json::object();
  tr["stages"] = json::array();
  auto stage = [&](json s) { tr["stages"].push_back(std::move(s)); };

  const int n = input.dim();
  if (n < 5) {
    stage({{"stage", "dimension"}, {"passed", false}, {"n", n}});
    throw PreconditionError("dimension", "the deduction needs n >= 5");
  }
  if (split_in.n() != n) throw Error(ErrorCode::kInvalidDimension, "split does not match dim");

  BlockSplit split = split_in;
  const CurvatureTensor<T> cr = normalize_split(input, split);
  const int d1 = split.d1;
  const int d2 = split.d2;
  stage({{"stage", "split"}, {"d1", d1}, {"d2", d2}, {"reordered", split_in.d1 > split_in.d2}});

  const double block = block_condition_residual(cr, split);
  const bool block_ok = block <= effective_tolerance<T>(tol);
  stage({{"stage", "hypothesis_block_condition"}, {"passed", block_ok}, {"residual", block}});
  if (!block_ok)
    throw PreconditionError("block_condition",
                            "block condition fails: residual " + std::to_string(block));

  const auto cert = two_stein_certificate(cr, tol);
  const bool stein_ok = cert.residual2 <= effective_tolerance<T>(tol);
  stage({{"stage", "hypothesis_two_stein"},
         {"passed", stein_ok},
         {"residual2", cert.residual2},
         {"H", scalar_json(cert.f2)}});
  if (!stein_ok)
    throw PreconditionError("two_stein", "Tr(cR_X^2) = H ||X||^4 fails: residual " +
                                             std::to_string(cert.residual2));
  const T h = cert.f2;

  const auto ledger = coefficient_forms(cr, split, tol);
  const auto pf = published_forms(cr, split);
  const bool dual = agree(pf.p1, ledger.p[1], tol) && agree(pf.p3, ledger.p[3], tol) &&
                    agree(pf.q1, ledger.q[1], tol) && agree(pf.q3, ledger.q[3], tol) &&
                    agree(pf.s1, ledger.s[1], tol);
  stage({{"stage", "coefficient_forms"},
         {"passed", dual},
         {"P1", scalar_json(ledger.p[1])},
         {"P3", scalar_json(ledger.p[3])},
         {"Q1", scalar_json(ledger.q[1])},
         {"Q3", scalar_json(ledger.q[3])},
         {"S1", scalar_json(ledger.s[1])}});
  if (!dual) throw Error(ErrorCode::kIdentityViolation, "coefficient forms disagree");

  Deduction<T> result;
  result.c = T(0);
  auto fail = [&](const std::string& why) {
    result.constant_curvature = false;
    result.violation = why;
    tr["verdict"] = "violation";
    tr["violation"] = why;
    return result;
  };

  if (d1 == 1) {
    const auto c1 = case1_identity_check(cr, split, tol);
    const bool equal = agree(c1.ledger_value, c1.sum_of_squares, tol);
    const bool zero = within(c1.sum_of_squares, tol);
    stage({{"stage", "case1_identity"},
           {"passed", equal && zero},
           {"ledger_value", scalar_json(c1.ledger_value)},
           {"sum_of_squares", scalar_json(c1.sum_of_squares)}});
    if (!equal) throw Error(ErrorCode::kIdentityViolation, "Case 1 identity fails");
    if (!zero) return fail("case1_sum_of_squares_nonzero");
  } else {
    const WeightPair w = select_xi_eta(d1, d2);
    const auto q = final_quadratic_form(cr, split, w, tol);
    const auto witness = q4_psd_witness(split, w);
    const bool parts_ok = q.q3_completion_exact && q.q4_matches_remainder && witness.passes;
    const bool zero = within(q.total, tol) && within(q.q1, tol) && within(q.q2, tol) &&
                      within(q.q3, tol) && within(q.q4, tol);
    stage({{"stage", "weights"},
           {"xi", scalar_json(w.xi)},
           {"eta", scalar_json(w.eta)},
           {"mu", scalar_json(w.mu)},
           {"nu", scalar_json(w.nu)}});
    stage({{"stage", "final_quadratic_form"},
           {"passed", parts_ok && zero},
           {"total", scalar_json(q.total)},
           {"q1", scalar_json(q.q1)},
           {"q2", scalar_json(q.q2)},
           {"q3", scalar_json(q.q3)},
           {"q4", scalar_json(q.q4)},
           {"q3_completion_exact", q.q3_completion_exact},
           {"q4_matches_remainder", q.q4_matches_remainder},
           {"q4_min_eigenvalue", std::min(witness.min_eigenvalue_w1, witness.min_eigenvalue_w2)},
           {"q4_determinant_identity", witness.passes}});
    if (!parts_ok) throw Error(ErrorCode::kIdentityViolation, "quadratic form decomposition fails");

    const auto set = solve_vector_set(case2_targets<C>(d1, d2, w), split);
    const C s_set = symmetrized_trace_formula<T>(ledger, set.aggregate);
    const C rhs = rhs_linear_form(split, set.aggregate, lift(h));
    const bool set_ok = agree(s_set, lift(q.total), tol) && within(rhs, tol);
    stage({{"stage", "vector_set"},
           {"passed", set_ok},
           {"vectors", set.vectors.size()},
           {"S", scalar_json(s_set)},
           {"rhs", scalar_json(rhs)}});
    if (!agree(s_set, lift(q.total), tol))
      throw Error(ErrorCode::kIdentityViolation, "S(X) over the vector set differs from the total");
    if (!zero) return fail("quadratic_form_nonzero");
  }

  // Component equalities in randomized block-orthogonal bases.
  double worst = 0;
  auto note = [&](const T& a, const T& b) { worst = std::max(worst, mag(T(a - b))); };
  for (int s = 0; s < options.bases; ++s) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(s)));
    const auto q = random_block_orthogonal<T>(d1, d2, rng);
    const auto r = change_basis(cr, q);
    if (d1 == 1) {
      for (int a = 1; a < n; ++a)
        for (int c = 1; c < n; ++c)
          for (int d = 1; d < n; ++d)
            if (a != c && a != d) note(r(0, c, 0, d), r(a, c, a, d));
      continue;
    }
    for (int k = 0; k < d1; ++k)
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j)
          if (i != k && j != k) note(r(i, k, i, k), r(j, k, j, k));
    for (int a = d1; a < n; ++a)
      for (int c = d1; c < n; ++c)
        for (int d = d1; d < n; ++d)
          if (c != a && d != a) note(r(a, c, a, c), r(a, d, a, d));
    for (int i = 0; i < d1; ++i)
      for (int a = d1; a < n; ++a) note(r(i, a, i, a), r(0, d1, 0, d1));
    for (int k = 0; k < d1; ++k) {
      T u(0), v(0);
      for (int i = 0; i < d1; ++i) u += r(i, k, i, k);
      for (int a = d1; a < n; ++a) v += r(a, k, a, k);
      note(from_long<T>(d2) * u, from_long<T>(d1 - 1) * v);
    }
    for (int a = d1; a < n; ++a) {
      T u(0), v(0);
      for (int c = d1; c < n; ++c) u += r(c, a, c, a);
      for (int i = 0; i < d1; ++i) v += r(i, a, i, a);
      note(from_long<T>(d1) * u, from_long<T>(d2 - 1) * v);
    }
  }
  const bool components_ok = worst <= effective_tolerance<T>(tol);
  stage({{"stage", "component_equalities"},
         {"passed", components_ok},
         {"bases", options.bases},
         {"seed", options.seed},
         {"max_defect", worst}});
  if (!components_ok) return fail("component_equalities");

  result.c = cr(0, d1, 0, d1);
  result.final_residual = max_abs_difference(cr, make_constant_curvature(n, result.c));
  const bool final_ok = result.final_residual <= effective_tolerance<T>(tol);
  stage({{"stage", "constant_curvature_comparison"},
         {"passed", final_ok},
         {"c", scalar_json(result.c)},
         {"residual", result.final_residual}});
  if (!final_ok) return fail("constant_curvature_comparison");
  result.constant_curvature = true;
  tr["verdict"] = "constant_curvature";
  tr["c"] = scalar_json(result.c);
  return result;
}

// ---------------------------------------------------------------------------

#define CURV_INSTANTIATE_COMPLEX(C)                                                              \
  template std::array<C, 4> elementary_symmetric<C>(std::span<const C>);                         \
  template class ZVector<C>;                                                                     \
  template struct CoefficientVector10<C>;                                                        \
  template CoefficientVector10<C> abc_coefficients<C>(const ZVector<C>&);                        \
  template C rhs_identity_value<C>(const ZVector<C>&, const C&);                                 \
  template C rhs_linear_form<C>(const BlockSplit&, const CoefficientVector10<C>&, const C&);     \
  template VectorSet<C> solve_vector_set<C>(const CoefficientVector10<C>&, const BlockSplit&);   \
  template std::vector<C> fourth_power_decomposition<C>(const C&);                               \
  template CoefficientVector10<C> case2_targets<C>(int, int, const WeightPair&);

#define CURV_INSTANTIATE_REAL(T)                                                                 \
  template FormLedger<T> coefficient_forms<T>(const CurvatureTensor<T>&, const BlockSplit&,      \
                                              double);                                           \
  template PublishedForms<T> published_forms<T>(const CurvatureTensor<T>&, const BlockSplit&);   \
  template ComplexOf<T> complex_square_trace<T>(const CurvatureTensor<T>&,                       \
                                                std::span<const ComplexOf<T>>);                  \
  template ComplexOf<T> symmetrized_trace_direct<T>(const CurvatureTensor<T>&, const BlockSplit&, \
                                                    const ZVector<ComplexOf<T>>&);               \
  template ComplexOf<T> symmetrized_trace_formula<T>(const FormLedger<T>&,                       \
                                                     const CoefficientVector10<ComplexOf<T>>&);  \
  template ComplexOf<T> symmetrized_trace_formula<T>(const FormLedger<T>&,                       \
                                                     const ZVector<ComplexOf<T>>&);              \
  template QuadDecomposition<T> final_quadratic_form<T>(const CurvatureTensor<T>&,               \
                                                        const BlockSplit&, const WeightPair&,    \
                                                        double);                                 \
  template Case1Values<T> case1_identity_check<T>(const CurvatureTensor<T>&, const BlockSplit&,  \
                                                  double);                                       \
  template CurvatureTensor<T> normalize_split<T>(const CurvatureTensor<T>&, BlockSplit&);        \
  template Deduction<T> constant_curvature_deduction<T>(const CurvatureTensor<T>&,               \
                                                        const BlockSplit&,                       \
                                                        const DeductionOptions&, json*);

CURV_INSTANTIATE_COMPLEX(GaussRational)
CURV_INSTANTIATE_COMPLEX(Complex)
CURV_INSTANTIATE_REAL(Rational)
CURV_INSTANTIATE_REAL(double)

}  // namespace curv
