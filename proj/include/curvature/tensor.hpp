#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "curvature/error.hpp"
#include "curvature/scalar.hpp"

namespace curv {

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, T(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  T trace() const {
    T acc(0);
    for (int i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
    return acc;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (int k = 0; k < a.cols_; ++k) {
        if (ScalarTraits<T>::is_zero(a(r, k))) continue;
        for (int c = 0; c < b.cols_; ++c) out(r, c) += a(r, k) * b(k, c);
      }
    return out;
  }
  friend Matrix operator*(const T& s, Matrix m) {
    for (auto& v : m.data_) v *= s;
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Index4 = std::array<int, 4>;

/// A (4,0) tensor on an n-dimensional inner-product space with orthonormal
/// basis e_0..e_{n-1}. Storage is dense (n^4); factories enforce the
/// curvature symmetries, `from_dense` does not (use validate_symmetries).
template <typename T>
class CurvatureTensor {
 public:
  using Scalar = T;

  CurvatureTensor() = default;
  /// The zero tensor.
  explicit CurvatureTensor(int dim);

  static CurvatureTensor from_dense(int dim, std::vector<T> entries);

  int dim() const { return dim_; }
  static constexpr Field field() { return ScalarTraits<T>::kField; }

  const T& operator()(int i, int j, int k, int l) const { return data_[offset(i, j, k, l)]; }
  const T& operator()(const Index4& idx) const { return (*this)(idx[0], idx[1], idx[2], idx[3]); }
  const std::vector<T>& dense() const { return data_; }

  CurvatureTensor& operator+=(const CurvatureTensor& o);
  CurvatureTensor& operator-=(const CurvatureTensor& o);
  CurvatureTensor& operator*=(const T& s);

  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
  friend CurvatureTensor operator-(CurvatureTensor a, const CurvatureTensor& b) { return a -= b; }
  friend CurvatureTensor operator*(const T& s, CurvatureTensor a) { return a *= s; }
  friend bool operator==(const CurvatureTensor& a, const CurvatureTensor& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  size_t offset(int i, int j, int k, int l) const {
    return ((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }

  int dim_ = 0;
  std::vector<T> data_;
};

/// The eight index permutations generated by the two antisymmetries and the
/// pair symmetry, with their signs.
struct OrbitMember {
  Index4 index;
  int sign;
};
std::array<OrbitMember, 8> symmetry_orbit(const Index4& idx);
/// Lexicographically smallest member of the orbit of idx, with the sign
/// relating R(idx) to R(representative).
OrbitMember orbit_representative(const Index4& idx);

/// Mutable dense 4-array used while assembling a tensor.
template <typename T>
class TensorBuilder {
 public:
  explicit TensorBuilder(int dim);

  int dim() const { return dim_; }
  T& at(int i, int j, int k, int l) { return data_[offset(i, j, k, l)]; }
  const T& at(int i, int j, int k, int l) const { return data_[offset(i, j, k, l)]; }

  /// Writes value to every member of the symmetry orbit of (i,j,k,l), with signs.
  void set_orbit(int i, int j, int k, int l, const T& value);

  CurvatureTensor<T> build() && { return CurvatureTensor<T>::from_dense(dim_, std::move(data_)); }

 private:
  size_t offset(int i, int j, int k, int l) const {
    return ((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }
  int dim_;
  std::vector<T> data_;
};

template <typename T>
struct SymmetricBilinear {
  Matrix<T> matrix;

  int dim() const { return matrix.rows(); }
  const T& operator()(int u, int v) const { return matrix(u, v); }
  T evaluate(std::span<const T> x, std::span<const T> y) const;
};

/// Matrix M[u][v] = R(e_u, X, e_v, X); Tr M = ricci(X, X).
template <typename T>
struct JacobiOperator {
  std::vector<T> base;
  Matrix<T> matrix;

  T trace() const { return matrix.trace(); }
  /// Tr(M^2) = sum_uv M_uv M_vu (bilinear, no conjugation).
  T trace_of_square() const;
};

struct Violation {
  std::string identity;  // "antisymmetry_12", "antisymmetry_34", "pair_symmetry", "bianchi"
  Index4 index;
  double residual;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// R(X,Y,Z,W) = kappa (<X,Z><Y,W> - <X,W><Y,Z>).
template <typename T>
CurvatureTensor<T> make_constant_curvature(int n, const T& kappa);

template <typename T>
ValidationReport validate_symmetries(const CurvatureTensor<T>& t,
                                     double tolerance = kDefaultTolerance);

/// rho(u, v) = sum_m R(u, e_m, v, e_m).
template <typename T>
SymmetricBilinear<T> ricci(const CurvatureTensor<T>& t);

template <typename T>
JacobiOperator<T> jacobi(const CurvatureTensor<T>& t, std::span<const T> x);

/// R - 2 * (unit constant curvature).
template <typename T>
CurvatureTensor<T> shift(const CurvatureTensor<T>& r);
template <typename T>
CurvatureTensor<T> unshift(const CurvatureTensor<T>& cr);

/// Components in the basis given by the columns of the orthogonal matrix q:
/// R'(a,b,c,d) = sum q_ia q_jb q_kc q_ld R(i,j,k,l).
template <typename T>
CurvatureTensor<T> change_basis(const CurvatureTensor<T>& t, const Matrix<T>& q);

/// Largest absolute entrywise difference.
template <typename T>
double max_abs_difference(const CurvatureTensor<T>& a, const CurvatureTensor<T>& b);

/// R(X, Y, Z, W) for arbitrary vectors.
template <typename T>
T evaluate(const CurvatureTensor<T>& t, std::span<const T> x, std::span<const T> y,
           std::span<const T> z, std::span<const T> w);

/// The vector R(X, Y)Z, i.e. the W-slot contracted away.
template <typename T>
std::vector<T> apply(const CurvatureTensor<T>& t, std::span<const T> x, std::span<const T> y,
                     std::span<const T> z);

template <typename T>
T dot(std::span<const T> a, std::span<const T> b);

template <typename T>
std::vector<T> basis_vector(int n, int k);

}  // namespace curv
