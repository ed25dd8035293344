#include "curvature/tensor.hpp"

#include <algorithm>

namespace curv {

std::array<OrbitMember, 8> symmetry_orbit(const Index4& idx) {
  const auto [i, j, k, l] = idx;
  return {{{{i, j, k, l}, 1},
           {{j, i, k, l}, -1},
           {{i, j, l, k}, -1},
           {{j, i, l, k}, 1},
           {{k, l, i, j}, 1},
           {{l, k, i, j}, -1},
           {{k, l, j, i}, -1},
           {{l, k, j, i}, 1}}};
}

OrbitMember orbit_representative(const Index4& idx) {
  auto orbit = symmetry_orbit(idx);
  return *std::min_element(orbit.begin(), orbit.end(),
                           [](const OrbitMember& a, const OrbitMember& b) { return a.index < b.index; });
}

template <typename T>
CurvatureTensor<T>::CurvatureTensor(int dim) : dim_(dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "tensor dimension must be positive");
  data_.assign(static_cast<size_t>(dim) * dim * dim * dim, T(0));
}

template <typename T>
CurvatureTensor<T> CurvatureTensor<T>::from_dense(int dim, std::vector<T> entries) {
  if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "tensor dimension must be positive");
  if (entries.size() != static_cast<size_t>(dim) * dim * dim * dim)
    throw Error(ErrorCode::kInvalidArgument, "dense entry count does not match dim^4");
  CurvatureTensor t;
  t.dim_ = dim;
  t.data_ = std::move(entries);
  return t;
}

template <typename T>
CurvatureTensor<T>& CurvatureTensor<T>::operator+=(const CurvatureTensor& o) {
  if (o.dim_ != dim_) throw Error(ErrorCode::kInvalidDimension, "dimension mismatch");
  for (size_t m = 0; m < data_.size(); ++m) data_[m] += o.data_[m];
  return *this;
}

template <typename T>
CurvatureTensor<T>& CurvatureTensor<T>::operator-=(const CurvatureTensor& o) {
  if (o.dim_ != dim_) throw Error(ErrorCode::kInvalidDimension, "dimension mismatch");
  for (size_t m = 0; m < data_.size(); ++m) data_[m] -= o.data_[m];
  return *this;
}

template <typename T>
CurvatureTensor<T>& CurvatureTensor<T>::operator*=(const T& s) {
  for (auto& v : data_) v *= s;
  return *this;
}

template <typename T>
TensorBuilder<T>::TensorBuilder(int dim) : dim_(dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "tensor dimension must be positive");
  data_.assign(static_cast<size_t>(dim) * dim * dim * dim, T(0));
}

template <typename T>
void TensorBuilder<T>::set_orbit(int i, int j, int k, int l, const T& value) {
  for (const auto& m : symmetry_orbit({i, j, k, l})) {
    const auto [a, b, c, d] = m.index;
    at(a, b, c, d) = m.sign > 0 ? value : T(-value);
  }
}

template <typename T>
T SymmetricBilinear<T>::evaluate(std::span<const T> x, std::span<const T> y) const {
  T acc(0);
  for (int u = 0; u < dim(); ++u)
    for (int v = 0; v < dim(); ++v) acc += x[u] * matrix(u, v) * y[v];
  return acc;
}

template <typename T>
T JacobiOperator<T>::trace_of_square() const {
  T acc(0);
  for (int u = 0; u < matrix.rows(); ++u)
    for (int v = 0; v < matrix.cols(); ++v) acc += matrix(u, v) * matrix(v, u);
  return acc;
}

template <typename T>
CurvatureTensor<T> make_constant_curvature(int n, const T& kappa) {
  if (n < 2) throw Error(ErrorCode::kInvalidDimension, "constant curvature needs n >= 2");
  TensorBuilder<T> b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      b.at(i, j, i, j) = kappa;
      b.at(i, j, j, i) = -kappa;
    }
  return std::move(b).build();
}

template <typename T>
ValidationReport validate_symmetries(const CurvatureTensor<T>& t, double tolerance) {
  const double tol = effective_tolerance<T>(tolerance);
  const int n = t.dim();
  ValidationReport report;
  auto check = [&](const char* name, const Index4& idx, const T& residual) {
    const double mag = ScalarTraits<T>::magnitude(residual);
    if (ScalarTraits<T>::kExact ? !ScalarTraits<T>::is_zero(residual) : mag > tol)
      report.violations.push_back({name, idx, mag});
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Index4 idx{i, j, k, l};
          check("antisymmetry_12", idx, t(i, j, k, l) + t(j, i, k, l));
          check("antisymmetry_34", idx, t(i, j, k, l) + t(i, j, l, k));
          check("pair_symmetry", idx, t(i, j, k, l) - t(k, l, i, j));
          check("bianchi", idx, t(i, j, k, l) + t(j, k, i, l) + t(k, i, j, l));
        }
  return report;
}

template <typename T>
SymmetricBilinear<T> ricci(const CurvatureTensor<T>& t) {
  const int n = t.dim();
  SymmetricBilinear<T> rho{Matrix<T>(n, n)};
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      T acc(0);
      for (int m = 0; m < n; ++m) acc += t(u, m, v, m);
      rho.matrix(u, v) = acc;
    }
  return rho;
}

template <typename T>
JacobiOperator<T> jacobi(const CurvatureTensor<T>& t, std::span<const T> x) {
  const int n = t.dim();
  if (static_cast<int>(x.size()) != n) throw Error(ErrorCode::kInvalidDimension, "vector length != dim");
  JacobiOperator<T> op{std::vector<T>(x.begin(), x.end()), Matrix<T>(n, n)};
  for (int k = 0; k < n; ++k) {
    if (ScalarTraits<T>::is_zero(x[k])) continue;
    for (int l = 0; l < n; ++l) {
      if (ScalarTraits<T>::is_zero(x[l])) continue;
      const T w = x[k] * x[l];
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          const T& r = t(u, k, v, l);
          if (!ScalarTraits<T>::is_zero(r)) op.matrix(u, v) += w * r;
        }
    }
  }
  return op;
}

template <typename T>
CurvatureTensor<T> shift(const CurvatureTensor<T>& r) {
  return r - T(2) * make_constant_curvature<T>(r.dim(), T(1));
}

template <typename T>
CurvatureTensor<T> unshift(const CurvatureTensor<T>& cr) {
  return cr + T(2) * make_constant_curvature<T>(cr.dim(), T(1));
}

template <typename T>
CurvatureTensor<T> change_basis(const CurvatureTensor<T>& t, const Matrix<T>& q) {
  const int n = t.dim();
  if (q.rows() != n || q.cols() != n) throw Error(ErrorCode::kInvalidDimension, "basis matrix size");
  // Contract one slot at a time: four O(n^5) passes.
  std::vector<T> cur = t.dense(), next(cur.size(), T(0));
  auto off = [n](int a, int b, int c, int d) {
    return ((static_cast<size_t>(a) * n + b) * n + c) * n + d;
  };
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(next.begin(), next.end(), T(0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const T& v = cur[off(a, b, c, d)];
            if (ScalarTraits<T>::is_zero(v)) continue;
            // New index replaces slot 0 and the remaining slots rotate left,
            // so after four passes the original order is restored.
            for (int m = 0; m < n; ++m) {
              const T& qv = q(a, m);
              if (ScalarTraits<T>::is_zero(qv)) continue;
              next[off(b, c, d, m)] += qv * v;
            }
          }
    std::swap(cur, next);
  }
  return CurvatureTensor<T>::from_dense(n, std::move(cur));
}

template <typename T>
double max_abs_difference(const CurvatureTensor<T>& a, const CurvatureTensor<T>& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kInvalidDimension, "dimension mismatch");
  double worst = 0.0;
  for (size_t m = 0; m < a.dense().size(); ++m)
    worst = std::max(worst, ScalarTraits<T>::magnitude(T(a.dense()[m] - b.dense()[m])));
  return worst;
}

template <typename T>
T evaluate(const CurvatureTensor<T>& t, std::span<const T> x, std::span<const T> y,
           std::span<const T> z, std::span<const T> w) {
  const std::vector<T> r = apply(t, x, y, z);
  return dot<T>(r, w);
}

template <typename T>
std::vector<T> apply(const CurvatureTensor<T>& t, std::span<const T> x, std::span<const T> y,
                     std::span<const T> z) {
  const int n = t.dim();
  std::vector<T> out(n, T(0));
  for (int i = 0; i < n; ++i) {
    if (ScalarTraits<T>::is_zero(x[i])) continue;
    for (int j = 0; j < n; ++j) {
      if (ScalarTraits<T>::is_zero(y[j])) continue;
      const T xy = x[i] * y[j];
      for (int k = 0; k < n; ++k) {
        if (ScalarTraits<T>::is_zero(z[k])) continue;
        const T xyz = xy * z[k];
        for (int l = 0; l < n; ++l) {
          const T& r = t(i, j, k, l);
          if (!ScalarTraits<T>::is_zero(r)) out[l] += xyz * r;
        }
      }
    }
  }
  return out;
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T acc(0);
  for (size_t m = 0; m < a.size(); ++m) acc += a[m] * b[m];
  return acc;
}

template <typename T>
std::vector<T> basis_vector(int n, int k) {
  std::vector<T> e(n, T(0));
  e[k] = T(1);
  return e;
}

#define CURV_INSTANTIATE(T)                                                                   \
  template class CurvatureTensor<T>;                                                          \
  template class TensorBuilder<T>;                                                            \
  template struct SymmetricBilinear<T>;                                                       \
  template struct JacobiOperator<T>;                                                          \
  template CurvatureTensor<T> make_constant_curvature<T>(int, const T&);                      \
  template ValidationReport validate_symmetries<T>(const CurvatureTensor<T>&, double);        \
  template SymmetricBilinear<T> ricci<T>(const CurvatureTensor<T>&);                          \
  template JacobiOperator<T> jacobi<T>(const CurvatureTensor<T>&, std::span<const T>);        \
  template CurvatureTensor<T> shift<T>(const CurvatureTensor<T>&);                            \
  template CurvatureTensor<T> unshift<T>(const CurvatureTensor<T>&);                          \
  template CurvatureTensor<T> change_basis<T>(const CurvatureTensor<T>&, const Matrix<T>&);   \
  template double max_abs_difference<T>(const CurvatureTensor<T>&, const CurvatureTensor<T>&); \
  template T evaluate<T>(const CurvatureTensor<T>&, std::span<const T>, std::span<const T>,   \
                         std::span<const T>, std::span<const T>);                             \
  template std::vector<T> apply<T>(const CurvatureTensor<T>&, std::span<const T>,             \
                                   std::span<const T>, std::span<const T>);                   \
  template T dot<T>(std::span<const T>, std::span<const T>);                                  \
  template std::vector<T> basis_vector<T>(int, int);

CURV_INSTANTIATE(Rational)
CURV_INSTANTIATE(GaussRational)
CURV_INSTANTIATE(double)
CURV_INSTANTIATE(Complex)

#undef CURV_INSTANTIATE

}  // namespace curv
