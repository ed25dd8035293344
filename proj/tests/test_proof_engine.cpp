#include <doctest.h>

#include "curvature/linalg.hpp"
#include "curvature/model_zoo.hpp"
#include "curvature/proof_engine.hpp"
#include "helpers.hpp"

using namespace curv;
using curv::test::gq;
using curv::test::q;
using GR = GaussRational;

TEST_CASE("elementary symmetric functions use ordered tuples") {
  const std::vector<GR> a = {GR(1), GR::i()};
  const auto s = elementary_symmetric<GR>(a);
  CHECK(s[0] == gq(1, 1));
  CHECK(s[1] == gq(0, 2));
  CHECK(s[2] == GR(0));
  CHECK(s[3] == GR(0));

  const std::vector<GR> b = {GR(1), GR(0), GR(0)};
  CHECK(elementary_symmetric<GR>(b) == std::array<GR, 4>{GR(1), GR(0), GR(0), GR(0)});

  // Brute force over ordered distinct tuples.
  const std::vector<GR> ones(4, GR(1));
  const auto s4 = elementary_symmetric<GR>(ones);
  CHECK(s4 == std::array<GR, 4>{GR(4), GR(12), GR(24), GR(24)});
}

TEST_CASE("ZVector rejects more than two nonzero entries per block") {
  const BlockSplit split(3, 3);
  CHECK_THROWS_AS(ZVector<GR>(split, {GR(1), GR(1), GR(1)}, {GR(0), GR(0), GR(0)}), Error);
  CHECK_THROWS_AS(ZVector<GR>(split, {GR(1), GR(1)}, {GR(0), GR(0), GR(0)}), Error);
  const ZVector<GR> z(split, {GR(1), GR(0), GR(2)}, {GR(0), GR(0), GR(0)});
  CHECK(z.sigma_x()[2] == GR(0));
  CHECK(z.sigma_x()[3] == GR(0));
}

TEST_CASE("abc coefficients: the Case 1 probe vector") {
  const ZVector<GR> z(BlockSplit(1, 4), {GR(1)}, {GR::i(), GR(0), GR(0), GR(0)});
  const auto k = abc_coefficients(z);
  CHECK(k.a(1) == GR(24));
  CHECK(k.b(1) == GR(6));
  CHECK(k.c(1) == GR(-12));
  for (int m : {1, 2, 4, 5, 7, 8, 9}) CHECK(k.values[m] == GR(0));
  CHECK(rhs_identity_value(z, GR(5)) == GR(0));
}

TEST_CASE("abc coefficients: x = e_0 and y = 0 leaves only A1") {
  const ZVector<GR> z(BlockSplit(2, 3), {GR(1), GR(0)}, {GR(0), GR(0), GR(0)});
  const auto k = abc_coefficients(z);
  CHECK(k.a(1) == GR(6));  // (d1-1)! d2!
  for (int m = 1; m < 10; ++m) CHECK(k.values[m] == GR(0));
  const ZVector<GR> zero(BlockSplit(3, 3), std::vector<GR>(3), std::vector<GR>(3));
  for (const auto& v : abc_coefficients(zero).values) CHECK(v == GR(0));
}

TEST_CASE("the right-hand side identity holds on seeded Z-vectors") {
  for (auto [d1, d2] : {std::pair{2, 3}, {1, 4}, {3, 3}, {2, 4}, {4, 1}}) {
    Rng rng(derive_seed(5, d1 * 10 + d2));
    for (int s = 0; s < 20; ++s) {
      const auto z = test::random_zvector(BlockSplit(d1, d2), rng);
      CHECK_NOTHROW(rhs_identity_value(z, GR(1)));
      CHECK(rhs_identity_value(z, GR(0)) == GR(0));
    }
  }
}

TEST_CASE("coefficient forms: extraction agrees with the published formulas") {
  SUBCASE("zero tensor") {
    const auto l = coefficient_forms(CurvatureTensor<Rational>(5), BlockSplit(2, 3));
    for (int h = 1; h <= 5; ++h) CHECK((l.p[h] == 0 && l.q[h] == 0));
    CHECK(l.monomials.empty());
  }
  SUBCASE("constant curvature") {
    const auto r = make_constant_curvature<Rational>(5, q(3));
    const auto l = coefficient_forms(r, BlockSplit(2, 3));
    const auto f = published_forms(r, BlockSplit(2, 3));
    CHECK(f.p1 == l.p[1]);
    CHECK(f.p3 == l.p[3]);
    CHECK(f.q1 == l.q[1]);
    CHECK(f.q3 == l.q[3]);
    CHECK(f.s1 == l.s[1]);
    // Each x_i^4 coefficient is (n-1) c^2.
    CHECK(l.p[1] == 2 * 4 * 9);
    CHECK(l.q[1] == 3 * 4 * 9);
  }
  SUBCASE("random block tensors") {
    for (auto [d1, d2] : {std::pair{2, 3}, {1, 4}, {3, 3}, {2, 4}, {3, 4}}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BlockSplit split(d1, d2);
        const auto r = random_block_tensor<Rational>(d1, d2, seed);
        const auto l = coefficient_forms(r, split);
        const auto f = published_forms(r, split);
        CHECK(f.p1 == l.p[1]);
        CHECK(f.p3 == l.p[3]);
        CHECK(f.q1 == l.q[1]);
        CHECK(f.q3 == l.q[3]);
        CHECK(f.s1 == l.s[1]);
        // Quadratic in the tensor.
        const auto l3 = coefficient_forms(q(3) * r, split);
        CHECK(l3.p[3] == 9 * l.p[3]);
        CHECK(l3.s[4] == 9 * l.s[4]);
      }
    }
  }
  SUBCASE("block condition is required") {
    CHECK_THROWS_AS(coefficient_forms(random_tensor<Rational>(5, 1), BlockSplit(2, 3)),
                    PreconditionError);
  }
}

TEST_CASE("complex square trace agrees with the Jacobi operator on real vectors") {
  const auto r = random_tensor<Rational>(5, 9);
  const std::vector<Rational> x = test::rational_vector({1, -2, 0, 3, 1});
  std::vector<GR> xc(x.begin(), x.end());
  CHECK(complex_square_trace<Rational>(r, xc) == GR(jacobi<Rational>(r, x).trace_of_square()));
}

TEST_CASE("symmetrized trace: direct enumeration equals the formula") {
  for (auto [d1, d2] : {std::pair{2, 3}, {1, 4}, {3, 3}, {2, 4}, {3, 4}}) {
    const BlockSplit split(d1, d2);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto r = random_block_tensor<Rational>(d1, d2, seed);
      const auto ledger = coefficient_forms(r, split);
      Rng rng(derive_seed(seed, 99));
      for (int s = 0; s < 4; ++s) {
        const auto z = test::random_zvector(split, rng);
        CHECK(symmetrized_trace_direct<Rational>(r, split, z) ==
              symmetrized_trace_formula<Rational>(ledger, z));
      }
    }
  }
}

TEST_CASE("symmetrized trace of constant curvature is H d1! d2! ||X||^4") {
  const BlockSplit split(2, 3);
  const auto r = make_constant_curvature<Rational>(5, q(3));
  const GR h(Rational(4 * 9));
  const auto ledger = coefficient_forms(r, split);
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    const auto z = test::random_zvector(split, rng);
    const GR direct = symmetrized_trace_direct<Rational>(r, split, z);
    CHECK(symmetrized_trace_formula<Rational>(ledger, z) == direct);
    CHECK(rhs_identity_value(z, h) == direct);
  }
  const ZVector<GR> zero(split, std::vector<GR>(2), std::vector<GR>(3));
  CHECK(symmetrized_trace_direct<Rational>(r, split, zero) == GR(0));
  CHECK(symmetrized_trace_formula<Rational>(ledger, zero) == GR(0));
}

TEST_CASE("symmetrized trace guard") {
  const BlockSplit split(7, 7);  // 5040^2 > 10^7
  const auto r = make_constant_curvature<Rational>(14, q(1));
  const ZVector<GR> z(split, std::vector<GR>(7, GR(0)), std::vector<GR>(7, GR(0)));
  ErrorCode code = ErrorCode::kInternal;
  try {
    symmetrized_trace_direct<Rational>(r, split, z);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == ErrorCode::kCombinatorialGuard);
}

TEST_CASE("fourth power decomposition") {
  for (const GR& w : {GR(1), GR(-1), gq(3, -7), GR(q(5, 3)), GR(36), GR(12)}) {
    const auto terms = fourth_power_decomposition(w);
    CHECK(terms.size() <= 20);
    GR sum(0);
    for (const auto& t : terms) sum += t * t * t * t;
    CHECK(sum == w);
  }
  CHECK(fourth_power_decomposition(GR(0)).empty());
}

TEST_CASE("vector set solver") {
  SUBCASE("zero target") {
    CHECK(solve_vector_set(CoefficientVector10<GR>{}, BlockSplit(2, 3)).vectors.empty());
  }
  SUBCASE("Case 2 prescription at (3,3)") {
    const auto w = select_xi_eta(3, 3);
    const auto t = case2_targets<GR>(3, 3, w);
    CHECK(t.a(1) == GR(4));
    CHECK(t.b(1) == GR(4));
    CHECK(t.c(1) == GR(-4));
    CHECK(t.a(3) == GR(1));
    CHECK(t.b(3) == GR(1));
    const auto set = solve_vector_set(t, BlockSplit(3, 3));
    CHECK(set.aggregate == t);
    CoefficientVector10<GR> sum;
    for (const auto& v : set.vectors) sum += abc_coefficients(v);
    CHECK(sum == t);
  }
  SUBCASE("probe points from the proof give a nonsingular system") {
    const BlockSplit split(2, 3);
    const std::vector<std::pair<std::vector<GR>, std::vector<GR>>> probes = {
        {{GR(1), GR(0)}, {GR(0), GR(0), GR(0)}},
        {{GR(1), GR(1)}, {GR(0), GR(0), GR(0)}},
        {{GR(1), GR(2)}, {GR(0), GR(0), GR(0)}},
        {{GR(0), GR(0)}, {GR(1), GR(0), GR(0)}},
        {{GR(0), GR(0)}, {GR(1), GR(1), GR(0)}},
        {{GR(0), GR(0)}, {GR(1), GR(2), GR(0)}},
        {{GR(1), GR(0)}, {GR(1), GR(0), GR(0)}},
        {{GR(1), GR(0)}, {GR(1), GR(1), GR(0)}},
        {{GR(1), GR(1)}, {GR(1), GR(0), GR(0)}},
        {{GR(1), GR(1)}, {GR(1), GR(1), GR(0)}},
    };
    Matrix<GR> m(10, 10);
    for (int c = 0; c < 10; ++c) {
      const auto k = abc_coefficients(ZVector<GR>(split, probes[c].first, probes[c].second));
      for (int r = 0; r < 10; ++r) m(r, c) = k.values[r];
    }
    CHECK(rank_exact(m) == 10);
  }
  SUBCASE("unreachable coordinates for d1 = 1") {
    CoefficientVector10<GR> t;
    t.a(3) = GR(1);
    CHECK_THROWS_AS(solve_vector_set(t, BlockSplit(1, 4)), Error);
    CoefficientVector10<GR> ok;
    ok.a(1) = GR(1);
    ok.c(2) = gq(2, 1);
    CHECK(solve_vector_set(ok, BlockSplit(1, 4)).aggregate == ok);
  }
  SUBCASE("float field") {
    CoefficientVector10<Complex> t;
    for (int m = 0; m < 10; ++m) t.values[m] = Complex(m - 3.0, 0.5 * m);
    const auto set = solve_vector_set(t, BlockSplit(2, 3));
    for (int m = 0; m < 10; ++m) CHECK(std::abs(set.aggregate.values[m] - t.values[m]) < 1e-8);
  }
}

TEST_CASE("select_xi_eta") {
  const auto w33 = select_xi_eta(3, 3);
  CHECK(w33.xi == 1);
  CHECK(w33.eta == 1);
  CHECK(w33.mu == 1);
  CHECK(w33.nu == 1);
  const auto w24 = select_xi_eta(2, 4);
  CHECK(w24.xi == 4);
  CHECK(w24.eta == 1);
  CHECK(w24.mu == 7);
  CHECK(w24.nu == 1);
  const auto w23 = select_xi_eta(2, 3);
  CHECK(w23.xi == q(5, 2));
  CHECK(w23.mu == 2);
  CHECK(w23.nu == q(1, 2));
  CHECK_THROWS_AS(select_xi_eta(2, 2), PreconditionError);
  CHECK_THROWS_AS(select_xi_eta(1, 4), PreconditionError);
  CHECK_THROWS_AS(select_xi_eta(4, 3), PreconditionError);
}

TEST_CASE("final quadratic form") {
  SUBCASE("zero tensor") {
    const auto d = final_quadratic_form(CurvatureTensor<Rational>(5), BlockSplit(2, 3),
                                        select_xi_eta(2, 3));
    CHECK(d.total == 0);
    CHECK(d.q4 == 0);
  }
  SUBCASE("constant curvature vanishes termwise") {
    const auto d = final_quadratic_form(make_constant_curvature<Rational>(5, q(-7, 2)),
                                        BlockSplit(2, 3), select_xi_eta(2, 3));
    CHECK(d.total == 0);
    CHECK(d.q1 == 0);
    CHECK(d.q2 == 0);
    CHECK(d.q3 == 0);
    CHECK(d.q4 == 0);
  }
  SUBCASE("random block tensors decompose exactly") {
    for (auto [d1, d2] : {std::pair{2, 3}, {2, 4}, {3, 3}, {3, 4}}) {
      const auto w = select_xi_eta(d1, d2);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = random_block_tensor<Rational>(d1, d2, seed);
        const auto d = final_quadratic_form(r, BlockSplit(d1, d2), w);
        CHECK(d.total > 0);
        CHECK(d.total == d.q1 + d.q2 + d.q3 + d.q4);
        CHECK(d.q3_completion_exact);
        CHECK(d.q4_matches_remainder);
        CHECK(d.q1 >= 0);
        CHECK(d.q2 >= 0);
        CHECK(d.q3 >= 0);
        CHECK(d.q4 >= 0);
      }
    }
  }
}

TEST_CASE("Case 1 identity") {
  const BlockSplit split(1, 4);
  const auto zero = case1_identity_check(CurvatureTensor<Rational>(5), split);
  CHECK(zero.ledger_value == 0);
  CHECK(zero.sum_of_squares == 0);
  const auto cc = case1_identity_check(make_constant_curvature<Rational>(5, q(2, 3)), split);
  CHECK(cc.ledger_value == 0);
  CHECK(cc.sum_of_squares == 0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto v = case1_identity_check(random_block_tensor<Rational>(1, 4, seed), split);
    CHECK(v.ledger_value == v.sum_of_squares);
    CHECK(v.sum_of_squares > 0);
  }
  CHECK_THROWS_AS(case1_identity_check(CurvatureTensor<Rational>(5), BlockSplit(2, 3)),
                  PreconditionError);
}

TEST_CASE("Q4 positivity witness") {
  const auto c23 = q4_psd_witness(BlockSplit(2, 3), select_xi_eta(2, 3));
  CHECK(c23.passes);
  CHECK(c23.closed_form_w1 == q(155, 2));
  const auto c33 = q4_psd_witness(BlockSplit(3, 3), select_xi_eta(3, 3));
  CHECK(c33.passes);
  CHECK(c33.determinant_w1 == 20);
  CHECK(c33.determinant_w2 == 20);
  CHECK(c33.min_eigenvalue_w1 >= -1e-12);
  WeightPair bad{q(1), q(10), q(0), q(0)};
  CHECK_THROWS_AS(q4_psd_witness(BlockSplit(2, 3), bad), PreconditionError);
}

TEST_CASE("constant curvature deduction") {
  SUBCASE("constant curvature is recognized") {
    nlohmann::json trace;
    const auto d = constant_curvature_deduction(make_constant_curvature<Rational>(5, q(3)),
                                                BlockSplit(2, 3), {}, &trace);
    CHECK(d.constant_curvature);
    CHECK(d.c == 3);
    CHECK(trace["verdict"] == "constant_curvature");
  }
  SUBCASE("all splits and the reversed order") {
    for (auto [d1, d2] : {std::pair{1, 4}, {4, 1}, {3, 2}, {1, 5}, {2, 4}, {3, 3}}) {
      const auto d = constant_curvature_deduction(
          make_constant_curvature<Rational>(d1 + d2, q(-1, 3)), BlockSplit(d1, d2));
      CHECK(d.constant_curvature);
      CHECK(d.c == q(-1, 3));
    }
  }
  SUBCASE("float field") {
    const auto d = constant_curvature_deduction(make_constant_curvature<double>(6, 0.75),
                                                BlockSplit(2, 4));
    CHECK(d.constant_curvature);
    CHECK(d.c == doctest::Approx(0.75));
  }
  SUBCASE("failing hypotheses are named") {
    auto failing = [](const CurvatureTensor<Rational>& t, BlockSplit split) {
      try {
        constant_curvature_deduction(t, split);
      } catch (const PreconditionError& e) {
        return e.hypothesis();
      }
      return std::string("none");
    };
    CHECK(failing(shift(su3_so3_tensor<Rational>(q(3, 2))), BlockSplit(1, 4)) == "block_condition");
    CHECK(failing(random_block_tensor<Rational>(2, 3, 4), BlockSplit(2, 3)) == "two_stein");
    CHECK(failing(make_constant_curvature<Rational>(4, q(1)), BlockSplit(2, 2)) == "dimension");
  }
}
