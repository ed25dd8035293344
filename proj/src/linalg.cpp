#include "curvature/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace curv {

namespace {

template <typename T>
int pivot_row(const Matrix<T>& a, int col, int from) {
  if constexpr (ScalarTraits<T>::kExact) {
    for (int r = from; r < a.rows(); ++r)
      if (!ScalarTraits<T>::is_zero(a(r, col))) return r;
    return -1;
  } else {
    int best = -1;
    double best_mag = 1e-12;
    for (int r = from; r < a.rows(); ++r) {
      const double m = ScalarTraits<T>::magnitude(a(r, col));
      if (m > best_mag) {
        best = r;
        best_mag = m;
      }
    }
    return best;
  }
}

template <typename T>
void swap_rows(Matrix<T>& a, int r1, int r2) {
  if (r1 == r2) return;
  for (int c = 0; c < a.cols(); ++c) std::swap(a(r1, c), a(r2, c));
}

}  // namespace

template <typename T>
std::vector<T> solve_exact(Matrix<T> a, std::vector<T> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n)
    throw Error(ErrorCode::kInvalidDimension, "solve_exact needs a square system");
  for (int col = 0; col < n; ++col) {
    const int p = pivot_row(a, col, col);
    if (p < 0) throw Error(ErrorCode::kInvalidArgument, "singular system");
    swap_rows(a, p, col);
    std::swap(b[p], b[col]);
    const T inv = T(1) / a(col, col);
    for (int r = 0; r < n; ++r) {
      if (r == col || ScalarTraits<T>::is_zero(a(r, col))) continue;
      const T f = a(r, col) * inv;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  for (int r = 0; r < n; ++r) b[r] = b[r] / a(r, r);
  return b;
}

template <typename T>
int rank_exact(Matrix<T> a) {
  int rank = 0;
  for (int col = 0; col < a.cols() && rank < a.rows(); ++col) {
    const int p = pivot_row(a, col, rank);
    if (p < 0) continue;
    swap_rows(a, p, rank);
    const T inv = T(1) / a(rank, col);
    for (int r = rank + 1; r < a.rows(); ++r) {
      if (ScalarTraits<T>::is_zero(a(r, col))) continue;
      const T f = a(r, col) * inv;
      for (int c = col; c < a.cols(); ++c) a(r, c) -= f * a(rank, c);
    }
    ++rank;
  }
  return rank;
}

template <typename T>
Matrix<T> random_orthogonal(int n, Rng& rng) {
  if constexpr (ScalarTraits<T>::kExact) {
    Matrix<T> q = Matrix<T>::identity(n);
    if (n == 1) return q;
    for (int pass = 0; pass < 3; ++pass) {
      std::vector<T> v(n);
      bool nonzero = false;
      while (!nonzero) {
        for (int i = 0; i < n; ++i) {
          v[i] = T(rng.uniform_int(-3, 3));
          nonzero = nonzero || !ScalarTraits<T>::is_zero(v[i]);
        }
      }
      T vv(0);
      for (const auto& x : v) vv += x * x;
      Matrix<T> h = Matrix<T>::identity(n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) h(r, c) -= T(2) * v[r] * v[c] / vv;
      q = q * h;
    }
    return q;
  } else {
    std::vector<std::vector<double>> cols;
    while (static_cast<int>(cols.size()) < n) {
      std::vector<double> v(n);
      for (auto& x : v) x = rng.normal();
      for (const auto& c : cols) {
        double d = 0;
        for (int i = 0; i < n; ++i) d += c[i] * v[i];
        for (int i = 0; i < n; ++i) v[i] -= d * c[i];
      }
      double norm = 0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-8) continue;
      for (auto& x : v) x /= norm;
      cols.push_back(std::move(v));
    }
    Matrix<T> q(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) q(r, c) = T(cols[c][r]);
    return q;
  }
}

template <typename T>
Matrix<T> random_block_orthogonal(int d1, int d2, Rng& rng) {
  const Matrix<T> q1 = random_orthogonal<T>(d1, rng);
  const Matrix<T> q2 = random_orthogonal<T>(d2, rng);
  Matrix<T> q(d1 + d2, d1 + d2);
  for (int r = 0; r < d1; ++r)
    for (int c = 0; c < d1; ++c) q(r, c) = q1(r, c);
  for (int r = 0; r < d2; ++r)
    for (int c = 0; c < d2; ++c) q(d1 + r, d1 + c) = q2(r, c);
  return q;
}

template <typename T>
double orthogonality_defect(const Matrix<T>& q) {
  const Matrix<T> p = q.transposed() * q;
  double worst = 0;
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) {
      T d = p(r, c) - (r == c ? T(1) : T(0));
      worst = std::max(worst, ScalarTraits<T>::magnitude(d));
    }
  return worst;
}

std::vector<double> eigenvalues(const Matrix<double>& symmetric) {
  const int n = symmetric.rows();
  if (n == 0) return {};
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = symmetric(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double min_eigenvalue(const Matrix<double>& symmetric) {
  const auto ev = eigenvalues(symmetric);
  return ev.empty() ? 0.0 : *std::min_element(ev.begin(), ev.end());
}

template <typename T>
Matrix<double> to_double(const Matrix<T>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out(r, c) = ScalarTraits<T>::to_double(m(r, c));
  return out;
}

template std::vector<Rational> solve_exact<Rational>(Matrix<Rational>, std::vector<Rational>);
template std::vector<GaussRational> solve_exact<GaussRational>(Matrix<GaussRational>,
                                                               std::vector<GaussRational>);
template std::vector<double> solve_exact<double>(Matrix<double>, std::vector<double>);
template std::vector<Complex> solve_exact<Complex>(Matrix<Complex>, std::vector<Complex>);
template int rank_exact<Rational>(Matrix<Rational>);
template int rank_exact<double>(Matrix<double>);
template int rank_exact<Complex>(Matrix<Complex>);
template int rank_exact<GaussRational>(Matrix<GaussRational>);
template Matrix<Rational> random_orthogonal<Rational>(int, Rng&);
template Matrix<double> random_orthogonal<double>(int, Rng&);
template Matrix<Rational> random_block_orthogonal<Rational>(int, int, Rng&);
template Matrix<double> random_block_orthogonal<double>(int, int, Rng&);
template double orthogonality_defect<Rational>(const Matrix<Rational>&);
template double orthogonality_defect<double>(const Matrix<double>&);
template Matrix<double> to_double<Rational>(const Matrix<Rational>&);
template Matrix<double> to_double<double>(const Matrix<double>&);

}  // namespace curv
