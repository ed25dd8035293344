#include "curvature/model_zoo.hpp"

#include "curvature/random.hpp"

namespace curv {

namespace {

// Assembles (c/4)(g∧g + sum_s R_{J_s}) from the matrices J_s[a][b] = <J_s e_a, e_b>.
template <typename T>
CurvatureTensor<T> hermitian_form(int n, const T& c, const std::vector<Matrix<T>>& structures) {
  const T quarter = c / T(4);
  TensorBuilder<T> b(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          T v = T((x == z && y == w) ? 1 : 0) - T((x == w && y == z) ? 1 : 0);
          for (const auto& j : structures)
            v += j(x, z) * j(y, w) - j(x, w) * j(y, z) + T(2) * j(x, y) * j(z, w);
          if (!ScalarTraits<T>::is_zero(v)) b.at(x, y, z, w) = quarter * v;
        }
  return std::move(b).build();
}

void check_generated(const auto& t, const char* what) {
  if (!validate_symmetries(t).ok())
    throw Error(ErrorCode::kInternal, std::string(what) + " produced a tensor without curvature symmetries");
}

Matrix<Rational> commutator(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Matrix<Rational> ab = a * b, ba = b * a;
  Matrix<Rational> out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = ab(r, c) - ba(r, c);
  return out;
}

template <typename T>
T from_rational(const Rational& v) {
  if constexpr (ScalarTraits<T>::kExact) {
    return T(v);
  } else {
    return T(v.get_d());
  }
}

}  // namespace

template <typename T>
CurvatureTensor<T> complex_space_form(int m, const T& c) {
  if (m < 1) throw Error(ErrorCode::kInvalidDimension, "complex dimension must be >= 1");
  const int n = 2 * m;
  Matrix<T> j(n, n);
  for (int k = 0; k < m; ++k) {
    j(2 * k, 2 * k + 1) = T(1);
    j(2 * k + 1, 2 * k) = T(-1);
  }
  auto t = hermitian_form<T>(n, c, {j});
  check_generated(t, "complex_space_form");
  return t;
}

template <typename T>
CurvatureTensor<T> quaternionic_space_form(int q, const T& c) {
  if (q < 1) throw Error(ErrorCode::kInvalidDimension, "quaternionic dimension must be >= 1");
  const int n = 4 * q;
  // images of (1, i, j, k) under left multiplication by i, j, k: {target, sign}
  static constexpr int kMaps[3][4][2] = {
      {{1, 1}, {0, -1}, {3, 1}, {2, -1}},
      {{2, 1}, {3, -1}, {0, -1}, {1, 1}},
      {{3, 1}, {2, 1}, {1, -1}, {0, -1}},
  };
  std::vector<Matrix<T>> js(3, Matrix<T>(n, n));
  for (int s = 0; s < 3; ++s)
    for (int blk = 0; blk < q; ++blk)
      for (int a = 0; a < 4; ++a)
        js[s](4 * blk + a, 4 * blk + kMaps[s][a][0]) = T(kMaps[s][a][1]);
  auto t = hermitian_form<T>(n, c, js);
  check_generated(t, "quaternionic_space_form");
  return t;
}

std::vector<Matrix<Rational>> su3_so3_basis() {
  auto mat = [](std::initializer_list<long> entries, long den) {
    Matrix<Rational> m(3, 3);
    int idx = 0;
    for (long e : entries) {
      m(idx / 3, idx % 3) = Rational(e) / Rational(den);
      ++idx;
    }
    return m;
  };
  const std::vector<Matrix<Rational>> g = {
      mat({1, 0, 0, 0, 0, 0, 0, 0, -1}, 1),
      mat({0, 1, 0, 1, 0, 0, 0, 0, 0}, 1),
      mat({0, 0, 1, 0, 0, 0, 1, 0, 0}, 1),
      mat({0, 0, 0, 0, 0, 1, 0, 1, 0}, 1),
  };
  // Left multiplication by 1+i+j in the basis (1, i, j, k), column-wise.
  static constexpr long kLq[4][4] = {
      {1, -1, -1, 0},
      {1, 1, 0, 1},
      {1, 0, 1, -1},
      {0, -1, 1, 1},
  };
  std::vector<Matrix<Rational>> basis;
  basis.push_back(mat({1, 0, 0, 0, -2, 0, 0, 0, 1}, 3));
  for (int k = 0; k < 4; ++k) {
    Matrix<Rational> h(3, 3);
    for (int j = 0; j < 4; ++j)
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) h(r, c) += Rational(kLq[j][k]) * g[j](r, c) / Rational(3);
    basis.push_back(std::move(h));
  }
  return basis;
}

template <typename T>
CurvatureTensor<T> su3_so3_tensor(const T& scale) {
  if constexpr (!ScalarTraits<T>::kComplex) {
    if (!(scale > T(0))) throw Error(ErrorCode::kInvalidArgument, "su3_so3 scale must be positive");
  }
  const auto basis = su3_so3_basis();
  const Rational base_scale(3, 2);
  TensorBuilder<T> b(5);
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) {
      const Matrix<Rational> xy = commutator(basis[x], basis[y]);
      for (int z = 0; z < 5; ++z) {
        const Matrix<Rational> xyz = commutator(xy, basis[z]);
        for (int w = 0; w < 5; ++w) {
          const Rational v = -base_scale * (xyz * basis[w]).trace();
          if (sgn(v) != 0) b.at(x, y, z, w) = from_rational<T>(v);
        }
      }
    }
  auto t = std::move(b).build();
  t *= from_rational<T>(base_scale) / scale;
  check_generated(t, "su3_so3_tensor");
  return t;
}

template <typename T>
CurvatureTensor<T> product_sphere_tensor(int p, int q, const T& kappa1, const T& kappa2) {
  if (p < 2 || q < 2) throw Error(ErrorCode::kInvalidDimension, "product factors need dimension >= 2");
  const int n = p + q;
  TensorBuilder<T> b(n);
  auto fill = [&](int lo, int hi, const T& kappa) {
    for (int i = lo; i < hi; ++i)
      for (int j = lo; j < hi; ++j) {
        if (i == j) continue;
        b.at(i, j, i, j) = kappa;
        b.at(i, j, j, i) = -kappa;
      }
  };
  fill(0, p, kappa1);
  fill(p, n, kappa2);
  return std::move(b).build();
}

template <typename T>
CurvatureTensor<T> bianchi_projection(const CurvatureTensor<T>& t) {
  const int n = t.dim();
  TensorBuilder<T> b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          b.at(i, j, k, l) = (T(2) * t(i, j, k, l) - t(j, k, i, l) - t(k, i, j, l)) / T(3);
  return std::move(b).build();
}

template <typename T>
CurvatureTensor<T> random_tensor(int n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kInvalidDimension, "random tensor needs n >= 2");
  Rng rng(seed);
  std::vector<T> raw(static_cast<size_t>(n) * n * n * n);
  for (auto& v : raw) {
    if constexpr (ScalarTraits<T>::kComplex) {
      const long re = rng.uniform_int(-5, 5);
      const long im = rng.uniform_int(-5, 5);
      if constexpr (ScalarTraits<T>::kExact) {
        v = T(Rational(re), Rational(im));
      } else {
        v = T(static_cast<double>(re), static_cast<double>(im));
      }
    } else {
      v = T(rng.uniform_int(-5, 5));
    }
  }
  const auto raw_at = [&](const Index4& idx) -> const T& {
    return raw[((static_cast<size_t>(idx[0]) * n + idx[1]) * n + idx[2]) * n + idx[3]];
  };
  TensorBuilder<T> b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          T acc(0);
          for (const auto& m : symmetry_orbit({i, j, k, l}))
            acc += m.sign > 0 ? raw_at(m.index) : T(-raw_at(m.index));
          b.at(i, j, k, l) = acc;
        }
  auto t = bianchi_projection(std::move(b).build());
  check_generated(t, "random_tensor");
  return t;
}

template <typename T>
CurvatureTensor<T> random_block_tensor(int d1, int d2, std::uint64_t seed) {
  if (d1 < 1 || d2 < 1) throw Error(ErrorCode::kInvalidDimension, "block dimensions must be positive");
  const int n = d1 + d2;
  const auto full = random_tensor<T>(n, seed);
  TensorBuilder<T> b(n);
  auto in_w1 = [d1](int x) { return x < d1; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const int ones = in_w1(i) + in_w1(j) + in_w1(k) + in_w1(l);
          if (ones == 4 || ones == 0) b.at(i, j, k, l) = full(i, j, k, l);
        }
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int a = d1; a < n; ++a)
        for (int c = d1; c < n; ++c)
          b.set_orbit(i, a, j, c, (full(i, a, j, c) + full(i, c, j, a)) / T(2));
  auto t = std::move(b).build();
  check_generated(t, "random_block_tensor");
  return t;
}

#define CURV_INSTANTIATE(T)                                                            \
  template CurvatureTensor<T> complex_space_form<T>(int, const T&);                    \
  template CurvatureTensor<T> quaternionic_space_form<T>(int, const T&);               \
  template CurvatureTensor<T> product_sphere_tensor<T>(int, int, const T&, const T&);  \
  template CurvatureTensor<T> bianchi_projection<T>(const CurvatureTensor<T>&);        \
  template CurvatureTensor<T> random_tensor<T>(int, std::uint64_t);                    \
  template CurvatureTensor<T> random_block_tensor<T>(int, int, std::uint64_t);

CURV_INSTANTIATE(Rational)
CURV_INSTANTIATE(GaussRational)
CURV_INSTANTIATE(double)
CURV_INSTANTIATE(Complex)
#undef CURV_INSTANTIATE

template CurvatureTensor<Rational> su3_so3_tensor<Rational>(const Rational&);
template CurvatureTensor<double> su3_so3_tensor<double>(const double&);

}  // namespace curv
