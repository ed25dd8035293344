#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "curvature/random.hpp"
#include "curvature/tensor.hpp"

namespace curv {

/// R^n = W1 + W2 with W1 spanned by e_0..e_{d1-1} and W2 by e_{d1}..e_{n-1}.
struct BlockSplit {
  int d1 = 0;
  int d2 = 0;

  BlockSplit() = default;
  BlockSplit(int d1_, int d2_);

  int n() const { return d1 + d2; }
  bool in_w1(int x) const { return x < d1; }
};

template <typename T>
struct EinsteinDeficit {
  T lambda;        // trace(ricci) / n
  double deficit;  // max |ricci - lambda * I|
};

enum class SteinVerdict { kEinstein, kTwoStein, kNeither };
const char* verdict_name(SteinVerdict v);

template <typename T>
struct SteinCertificate {
  T f1;
  T f2;
  double residual1 = 0;  // max defect of the degree-2 polarization
  double residual2 = 0;  // max defect of the degree-4 polarization
  SteinVerdict verdict = SteinVerdict::kNeither;
  /// False when f1/f2 are least-squares fits over a nonzero defect.
  bool certifying = false;
};

template <typename T>
EinsteinDeficit<T> einstein_deficit(const CurvatureTensor<T>& t);

/// Tr(R_X^2) for a single vector.
template <typename T>
T jacobi_square_trace(const CurvatureTensor<T>& t, std::span<const T> x);

/// The symmetric 4-linear form obtained by polarizing X -> Tr(R_X^2), at a
/// sorted index tuple a <= b <= c <= d.
template <typename T>
class QuarticPolarization {
 public:
  explicit QuarticPolarization(const CurvatureTensor<T>& t);
  T operator()(int a, int b, int c, int d);

 private:
  T gram(int k, int l, int kp, int lp);
  const CurvatureTensor<T>& t_;
};

/// Compares the polarizations of Tr R_X and Tr(R_X^2) with those of ||X||^2
/// and ||X||^4 on every index tuple.
template <typename T>
SteinCertificate<T> two_stein_certificate(const CurvatureTensor<T>& t,
                                          double tolerance = kDefaultTolerance);

/// sum_m <R(X,e_m)X, R(X,e_m)Y>, with no conditions on X, Y.
template <typename T>
T frame_sum(const CurvatureTensor<T>& t, std::span<const T> x, std::span<const T> y);

/// sum_m <R(X,e_m)X, R(X,e_m)Y> - 2 rho(X,Y) for unit X and unit Y orthogonal to X.
/// Throws PreconditionError("unit_orthogonal") otherwise.
template <typename T>
T hc2_residual(const CurvatureTensor<T>& r, std::span<const T> x, std::span<const T> y,
               double tolerance = kDefaultTolerance);

/// Seeded orthonormal pair (first two columns of random_orthogonal).
template <typename T>
std::pair<std::vector<T>, std::vector<T>> orthonormal_pair(int n, Rng& rng);

template <typename T>
struct ShiftEquivalenceReport {
  int samples = 0;
  std::uint64_t seed = 0;
  double identity_max_defect = 0;  // |frame_sum(cR) - hc2_residual(R)| over samples
  bool identity_holds = false;
  double hc2_max_residual = 0;
  T shifted_h;                     // f2 of the shifted tensor
  double shifted_residual2 = 0;
  bool hc2_holds = false;
  bool shifted_two_stein = false;
  bool consistent = false;         // hc2_holds == shifted_two_stein
};

template <typename T>
ShiftEquivalenceReport<T> shift_equivalence_check(const CurvatureTensor<T>& r, int samples,
                                                  std::uint64_t seed,
                                                  double tolerance = kDefaultTolerance);

template <typename T>
struct TraceDerivative {
  T symbolic;                // 4 sum_m <cR(X,e_m)X, cR(X,e_m)Y>
  double finite_difference;  // (F(X+hY) - F(X-hY)) / 2h with F = Tr(cR_X^2), in f64
};

template <typename T>
TraceDerivative<T> trace_derivative_identity(const CurvatureTensor<T>& cr, std::span<const T> x,
                                             std::span<const T> y, double step = 1e-4);

/// max |component| over the R_ijka, R_ijab, R_iabc orbits.
template <typename T>
double block_condition_residual(const CurvatureTensor<T>& t, const BlockSplit& split);

/// max |R_iajb - R_ibja|; zero whenever the block residual is zero (Bianchi).
template <typename T>
double mixed_pair_asymmetry(const CurvatureTensor<T>& t, const BlockSplit& split);

}  // namespace curv
