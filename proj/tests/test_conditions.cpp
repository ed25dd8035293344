#include <doctest.h>

#include "curvature/conditions.hpp"
#include "curvature/linalg.hpp"
#include "curvature/model_zoo.hpp"
#include "helpers.hpp"

using namespace curv;
using curv::test::q;

TEST_CASE("Einstein deficit") {
  const auto e = einstein_deficit(make_constant_curvature<Rational>(5, q(3)));
  CHECK(e.lambda == 12);
  CHECK(e.deficit == 0.0);
  CHECK(einstein_deficit(su3_so3_tensor<Rational>(q(3, 2))).deficit == 0.0);
  CHECK(einstein_deficit(product_sphere_tensor<Rational>(2, 3, q(1), q(3))).deficit > 0.0);
}

TEST_CASE("2-stein certificate") {
  for (int n : {5, 6, 7}) {
    for (long k : {-2, 0, 1, 5}) {
      const auto cert = two_stein_certificate(make_constant_curvature<Rational>(n, q(k)));
      CHECK(cert.f1 == (n - 1) * k);
      CHECK(cert.f2 == (n - 1) * k * k);
      CHECK(cert.residual1 == 0.0);
      CHECK(cert.residual2 == 0.0);
      CHECK(cert.verdict == SteinVerdict::kTwoStein);
    }
  }
  const auto rnd = two_stein_certificate(random_tensor<Rational>(5, 3));
  CHECK(rnd.verdict == SteinVerdict::kNeither);
  CHECK_FALSE(rnd.certifying);
  CHECK(rnd.residual2 > 0.0);
}

TEST_CASE("polarization agrees with dense sampling") {
  // Independent oracle: Tr(R_X^2) on random vectors against f2 ||X||^4.
  const auto r = su3_so3_tensor<Rational>(q(3, 2));
  const auto cert = two_stein_certificate(r);
  Rng rng(21);
  for (int s = 0; s < 50; ++s) {
    std::vector<Rational> x(5);
    for (auto& v : x) v = rng.uniform_int(-3, 3);
    const Rational n2 = dot<Rational>(x, x);
    CHECK(jacobi_square_trace<Rational>(r, x) == cert.f2 * n2 * n2);
  }
  const auto bad = product_sphere_tensor<Rational>(2, 3, q(2), q(1));
  const auto bc = two_stein_certificate(bad);
  bool found = false;
  for (int s = 0; s < 50 && !found; ++s) {
    std::vector<Rational> x(5);
    for (auto& v : x) v = rng.uniform_int(-3, 3);
    const Rational n2 = dot<Rational>(x, x);
    if (jacobi_square_trace<Rational>(bad, x) != bc.f2 * n2 * n2) found = true;
  }
  CHECK(found);
}

TEST_CASE("hc2 residual") {
  const auto r = make_constant_curvature<Rational>(5, q(4));
  CHECK(hc2_residual<Rational>(r, basis_vector<Rational>(5, 0), basis_vector<Rational>(5, 1)) == 0);
  const std::vector<Rational> two = test::rational_vector({2, 0, 0, 0, 0});
  CHECK_THROWS_AS(hc2_residual<Rational>(r, two, basis_vector<Rational>(5, 1)), PreconditionError);
  CHECK_THROWS_AS(hc2_residual<Rational>(r, basis_vector<Rational>(5, 0), basis_vector<Rational>(5, 0)),
                  PreconditionError);

  const auto rnd = random_tensor<Rational>(5, 3);
  bool nonzero = false;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(s);
    const auto [x, y] = orthonormal_pair<Rational>(5, rng);
    if (hc2_residual<Rational>(rnd, x, y) != 0) nonzero = true;
  }
  CHECK(nonzero);
}

TEST_CASE("hc2 residual is invariant under a simultaneous change of basis") {
  const auto r = random_tensor<Rational>(5, 6);
  Rng rng(2);
  const auto qm = random_orthogonal<Rational>(5, rng);
  const auto [x, y] = orthonormal_pair<Rational>(5, rng);
  // Components in the new basis: x' = Q^T x.
  auto rotate = [&](const std::vector<Rational>& v) {
    std::vector<Rational> out(5);
    for (int m = 0; m < 5; ++m)
      for (int a = 0; a < 5; ++a) out[m] += qm(a, m) * v[a];
    return out;
  };
  CHECK(hc2_residual<Rational>(change_basis(r, qm), rotate(x), rotate(y)) ==
        hc2_residual<Rational>(r, x, y));
}

TEST_CASE("shift equivalence") {
  const auto r = make_constant_curvature<Rational>(5, q(5));
  const auto rep = shift_equivalence_check(r, 20, 1);
  CHECK(rep.identity_holds);
  CHECK(rep.hc2_holds);
  CHECK(rep.shifted_two_stein);
  CHECK(rep.shifted_h == 36);
  CHECK(rep.consistent);

  const auto rnd = shift_equivalence_check(random_tensor<Rational>(5, 3), 20, 2);
  CHECK(rnd.identity_holds);
  CHECK(rnd.identity_max_defect == 0.0);
  CHECK_FALSE(rnd.hc2_holds);
  CHECK_FALSE(rnd.shifted_two_stein);
  CHECK(rnd.consistent);

  const auto su3 = shift_equivalence_check(su3_so3_tensor<Rational>(q(3, 2)), 50, 3);
  CHECK(su3.hc2_holds);
  CHECK(su3.shifted_two_stein);
  CHECK(su3.consistent);
  const auto cpx = shift_equivalence_check(complex_space_form<Rational>(3, q(4)), 30, 4);
  CHECK(cpx.hc2_holds);
  CHECK(cpx.shifted_two_stein);
}

TEST_CASE("trace derivative identity") {
  const auto cr = shift(random_tensor<double>(5, 9));
  const std::vector<double> x = {0.3, -1.0, 0.5, 0.2, 0.9};
  const std::vector<double> y = {1.0, 0.1, -0.4, 0.7, 0.0};
  const auto d = trace_derivative_identity<double>(cr, x, y);
  CHECK(d.symbolic == doctest::Approx(d.finite_difference).epsilon(1e-6));
  // Euler identity along X.
  const auto e = trace_derivative_identity<double>(cr, x, x);
  CHECK(e.symbolic == doctest::Approx(4 * jacobi_square_trace<double>(cr, x)));

  const auto cc = shift(make_constant_curvature<Rational>(5, q(5)));
  const auto o = trace_derivative_identity<Rational>(cc, basis_vector<Rational>(5, 0),
                                                     basis_vector<Rational>(5, 3));
  CHECK(o.symbolic == 0);
  const std::vector<Rational> zero(5);
  CHECK_THROWS_AS(trace_derivative_identity<Rational>(cc, zero, basis_vector<Rational>(5, 1)),
                  PreconditionError);
}

TEST_CASE("block condition") {
  CHECK(block_condition_residual(make_constant_curvature<Rational>(5, q(3)), BlockSplit(1, 4)) == 0.0);
  CHECK(block_condition_residual(random_block_tensor<Rational>(2, 3, 1), BlockSplit(2, 3)) == 0.0);
  CHECK(mixed_pair_asymmetry(random_block_tensor<Rational>(2, 3, 1), BlockSplit(2, 3)) == 0.0);
  CHECK(block_condition_residual(random_tensor<Rational>(5, 1), BlockSplit(2, 3)) > 0.0);
  CHECK(block_condition_residual(su3_so3_tensor<Rational>(q(3, 2)), BlockSplit(1, 4)) > 0.0);
  CHECK_THROWS_AS(BlockSplit(0, 3), Error);
}
