#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvature/conditions.hpp"
#include "curvature/tensor.hpp"

namespace curv {

/// Ordered-tuple sums: sigma_1 = sum x_i, sigma_2 = sum_{i != j} x_i x_j,
/// sigma_3, sigma_4 over pairwise distinct ordered tuples. So sigma_2(x1, x2) = 2 x1 x2.
template <typename C>
std::array<C, 4> elementary_symmetric(std::span<const C> v);

/// X = sum x_i e_i + sum y_a e_a with at most two nonzero x's and two nonzero y's.
template <typename C>
class ZVector {
 public:
  ZVector(BlockSplit split, std::vector<C> x, std::vector<C> y);

  const BlockSplit& split() const { return split_; }
  const std::vector<C>& x() const { return x_; }
  const std::vector<C>& y() const { return y_; }
  const std::array<C, 4>& sigma_x() const { return sigma_x_; }
  const std::array<C, 4>& sigma_y() const { return sigma_y_; }

  /// Coordinates in R^n order (x block first).
  std::vector<C> coordinates() const;
  ZVector scaled(const C& t) const;

 private:
  BlockSplit split_;
  std::vector<C> x_, y_;
  std::array<C, 4> sigma_x_, sigma_y_;
};

/// (A1, A2, A3, B1, B2, B3, C1, C2, C3, C4).
template <typename C>
struct CoefficientVector10 {
  std::array<C, 10> values{};

  C& a(int h) { return values[h - 1]; }
  C& b(int h) { return values[2 + h]; }
  C& c(int h) { return values[5 + h]; }
  const C& a(int h) const { return values[h - 1]; }
  const C& b(int h) const { return values[2 + h]; }
  const C& c(int h) const { return values[5 + h]; }

  CoefficientVector10& operator+=(const CoefficientVector10& o) {
    for (size_t m = 0; m < values.size(); ++m) values[m] += o.values[m];
    return *this;
  }
  friend bool operator==(const CoefficientVector10& p, const CoefficientVector10& q) {
    return p.values == q.values;
  }
  static const std::array<const char*, 10>& names();
};

/// m! with m! = 0 for m < 0.
long factorial_or_zero(int m);

template <typename C>
CoefficientVector10<C> abc_coefficients(const ZVector<C>& x);

/// Aggregated quadratic forms P_h, Q_h (h = 1..5) and S_h (h = 1..4) of the
/// quartic Tr(cR_X^2), read off by exact monomial extraction. P4, P5, Q4, Q5
/// do not enter the symmetrized trace on Z; they are kept for completeness.
template <typename T>
struct FormLedger {
  std::array<T, 6> p{};  // index 1..5
  std::array<T, 6> q{};
  std::array<T, 5> s{};  // index 1..4
  /// Coefficient of every monomial of Tr(cR_X^2), keyed by sorted index tuple.
  std::map<Index4, T> monomials;
};

/// The five forms P1, P3, Q1, Q3, S1 as explicit sums over components.
template <typename T>
struct PublishedForms {
  T p1, p3, q1, q3, s1;
};

/// Precondition: block_condition_residual(cR, split) == 0 (within tolerance).
template <typename T>
FormLedger<T> coefficient_forms(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                double tolerance = kDefaultTolerance);

template <typename T>
PublishedForms<T> published_forms(const CurvatureTensor<T>& cr, const BlockSplit& split);

/// Tr(cR_X^2) for a complex X and real cR (complex-bilinear).
template <typename T>
ComplexOf<T> complex_square_trace(const CurvatureTensor<T>& cr, std::span<const ComplexOf<T>> x);

inline constexpr long kPermutationGuard = 10'000'000;

/// Sum over Sym(d1) x Sym(d2) of Tr(cR_{X^pi}^2), by enumeration.
template <typename T>
ComplexOf<T> symmetrized_trace_direct(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                      const ZVector<ComplexOf<T>>& x);

/// sum A_h P_h + sum B_h Q_h + sum C_h S_h.
template <typename T>
ComplexOf<T> symmetrized_trace_formula(const FormLedger<T>& ledger,
                                       const CoefficientVector10<ComplexOf<T>>& coefficients);
template <typename T>
ComplexOf<T> symmetrized_trace_formula(const FormLedger<T>& ledger, const ZVector<ComplexOf<T>>& x);

/// H (d1 A1 + d1(d1-1) A3 + d2 B1 + d2(d2-1) B3 + d1 d2 C1), checked against
/// H d1! d2! (||x||^2 + ||y||^2)^2. Throws kIdentityViolation on mismatch.
template <typename C>
C rhs_identity_value(const ZVector<C>& x, const C& h);

/// Same linear functional on an aggregated coefficient vector.
template <typename C>
C rhs_linear_form(const BlockSplit& split, const CoefficientVector10<C>& coefficients, const C& h);

template <typename C>
struct VectorSet {
  BlockSplit split;
  std::vector<ZVector<C>> vectors;
  CoefficientVector10<C> aggregate;
};

/// A set of Z-vectors whose summed coefficient vectors equal targets exactly.
template <typename C>
VectorSet<C> solve_vector_set(const CoefficientVector10<C>& targets, const BlockSplit& split);

/// Writes w as a sum of fourth powers t^4 (exact Gaussian rationals: at most 20 terms).
template <typename C>
std::vector<C> fourth_power_decomposition(const C& w);

struct WeightPair {
  Rational xi, eta, mu, nu;
  /// All four positivity conditions on (xi, eta).
  static bool admissible(int d1, int d2, const Rational& xi, const Rational& eta);
};

WeightPair select_xi_eta(int d1, int d2);

/// Case 2 target: A2=B2=C2=C3=C4=0, A3=xi, B3=eta, C1=-2(xi+eta),
/// A1=(d2-d1+1)xi+d2 eta, B1=(d1-d2+1)eta+d1 xi.
template <typename C>
CoefficientVector10<C> case2_targets(int d1, int d2, const WeightPair& w);

template <typename T>
struct QuadDecomposition {
  T total;
  T q1, q2, q3, q4;
  T q3_raw;     // before completing squares
  T q4_direct;  // from the two bracket families
  std::vector<T> u_w1, v_w1;  // U_k, V_k
  std::vector<T> u_w2, v_w2;  // U_a, V_a
  bool q3_completion_exact = false;
  bool q4_matches_remainder = false;
};

template <typename T>
QuadDecomposition<T> final_quadratic_form(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                          const WeightPair& w, double tolerance = kDefaultTolerance);

template <typename T>
struct Case1Values {
  T ledger_value;    // d2 P1 + Q1 - 2 S1
  T sum_of_squares;  // sum_{a != c,d} (cR_0c0d - cR_acad)^2
};

template <typename T>
Case1Values<T> case1_identity_check(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                    double tolerance = kDefaultTolerance);

struct Q4Certificate {
  double min_eigenvalue_w1 = 0;  // bracket over k != l in W1 (variables u: d1-2, v: d2)
  double min_eigenvalue_w2 = 0;  // bracket over c != d in W2 (variables u: d1, v: d2-2)
  Rational determinant_w1, closed_form_w1;
  Rational determinant_w2, closed_form_w2;
  bool passes = false;
};

/// Quadratic-form matrices of the two bracket families.
std::pair<Matrix<Rational>, Matrix<Rational>> q4_bracket_matrices(const BlockSplit& split,
                                                                  const WeightPair& w);

Q4Certificate q4_psd_witness(const BlockSplit& split, const WeightPair& w,
                             double tolerance = 1e-12);

struct DeductionOptions {
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  int bases = 32;
};

template <typename T>
struct Deduction {
  bool constant_curvature = false;
  T c;
  double final_residual = 0;
  std::string violation;  // empty when constant_curvature
};

/// Runs the full argument on cR: hypotheses, ledger, Case 1 or Case 2,
/// component equalities in randomized block bases, final comparison.
/// Each stage is appended to trace when given. Throws PreconditionError
/// naming "dimension", "block_condition" or "two_stein".
template <typename T>
Deduction<T> constant_curvature_deduction(const CurvatureTensor<T>& cr, const BlockSplit& split,
                                          const DeductionOptions& options = {},
                                          nlohmann::json* trace = nullptr);

/// Reorders coordinates so that the smaller block comes first.
template <typename T>
CurvatureTensor<T> normalize_split(const CurvatureTensor<T>& t, BlockSplit& split);

}  // namespace curv
