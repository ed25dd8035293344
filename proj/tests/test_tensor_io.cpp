#include <doctest.h>

#include "curvature/model_zoo.hpp"
#include "curvature/tensor_io.hpp"
#include "helpers.hpp"

using namespace curv;
using curv::test::q;

namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    parse_tensor(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

AnyTensor zoo(const std::string& spec) { return generate(parse_zoo_spec(nlohmann::json::parse(spec))); }

}  // namespace

TEST_CASE("a single entry generates constant curvature 1 in dimension 2") {
  const auto t = parse_tensor(R"({"dim":2,"field":"rational","entries":[[0,1,0,1,"1"]]})");
  REQUIRE(std::holds_alternative<CurvatureTensor<Rational>>(t));
  CHECK(std::get<CurvatureTensor<Rational>>(t) == make_constant_curvature<Rational>(2, q(1)));
}

TEST_CASE("any member of an orbit generates it, with signs") {
  const auto a = parse_tensor(R"({"dim":3,"field":"rational","entries":[[1,0,0,1,"-3/2"]]})");
  const auto& r = std::get<CurvatureTensor<Rational>>(a);
  CHECK(r(0, 1, 0, 1) == q(3, 2));
  CHECK(r(1, 0, 1, 0) == q(3, 2));
  CHECK(r(0, 1, 1, 0) == q(-3, 2));
  const auto b = parse_tensor(R"({"dim":3,"field":"rational","entries":[[0,1,0,1,"3/2"],[1,0,1,0,1.5]]})");
  CHECK(std::get<CurvatureTensor<Rational>>(b) == r);
}

TEST_CASE("parse errors are classified") {
  CHECK(parse_code("{\"dim\":5,") == ErrorCode::kParse);
  CHECK(parse_code("[1,2]") == ErrorCode::kParse);
  CHECK(parse_code(R"({"dim":2,"field":"quaternion","entries":[]})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"dim":2,"field":"rational","entries":[[0,1,0]]})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"dim":2,"field":"rational","entries":[[0,1,0,1,"x"]]})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"dim":2,"field":"f64","entries":[[0,1,0,1,"1"]]})") == ErrorCode::kParse);
  CHECK(parse_code(R"({"dim":0,"field":"rational","entries":[]})") == ErrorCode::kInvalidDimension);
  CHECK(parse_code(R"({"dim":2,"field":"rational","entries":[[0,2,0,1,"1"]]})") ==
        ErrorCode::kIndexOutOfRange);
  CHECK(parse_code(R"({"dim":2,"field":"rational","entries":[[0,-1,0,1,"1"]]})") ==
        ErrorCode::kIndexOutOfRange);
}

TEST_CASE("inconsistent orbit values are symmetry conflicts") {
  CHECK(parse_code(R"({"dim":2,"field":"rational","entries":[[0,1,0,1,"1"],[1,0,1,0,"2"]]})") ==
        ErrorCode::kSymmetryConflict);
  CHECK(parse_code(R"({"dim":2,"field":"rational","entries":[[0,1,0,1,"1"],[1,0,0,1,"1"]]})") ==
        ErrorCode::kSymmetryConflict);
  CHECK(parse_code(R"({"dim":3,"field":"rational","entries":[[0,0,1,2,"1"]]})") ==
        ErrorCode::kSymmetryConflict);
  // R_0123 alone breaks the first Bianchi identity.
  CHECK(parse_code(R"({"dim":4,"field":"rational","entries":[[0,1,2,3,"1"]]})") ==
        ErrorCode::kSymmetryConflict);
  CHECK(parse_code(R"({"dim":4,"field":"f64","entries":[[0,1,2,3,1e-3]]})") ==
        ErrorCode::kSymmetryConflict);
  CHECK_NOTHROW(parse_tensor(R"({"dim":3,"field":"rational","entries":[[0,0,1,2,"0"]]})"));
}

TEST_CASE("field-specific value syntax") {
  const auto g = parse_tensor(R"({"dim":2,"field":"gaussian_rational","entries":[[0,1,0,1,"1/2+1/3i"]]})");
  CHECK(std::get<CurvatureTensor<GaussRational>>(g)(1, 0, 1, 0) ==
        GaussRational(q(1, 2), q(1, 3)));
  const auto c = parse_tensor(R"({"dim":2,"field":"c64","entries":[[0,1,0,1,[0.5,-2]]]})");
  CHECK(std::get<CurvatureTensor<Complex>>(c)(0, 1, 0, 1) == Complex(0.5, -2));
  const auto d = parse_tensor(R"({"dim":2,"field":"f64","entries":[[0,1,0,1,3]]})");
  CHECK(std::get<CurvatureTensor<double>>(d)(0, 1, 0, 1) == 3.0);
}

TEST_CASE("emit is canonical and round-trips zoo tensors in every field") {
  const char* specs[] = {
      R"({"kind":"constant","params":{"n":5,"kappa":"3/2"}})",
      R"({"kind":"complex_space_form","params":{"m":2,"c":4}})",
      R"({"kind":"quaternionic_space_form","params":{"q":1,"c":"-1"}})",
      R"({"kind":"su3_so3","params":{"scale":"3/2"}})",
      R"({"kind":"product_spheres","params":{"p":2,"q":3,"kappa1":2,"kappa2":1}})",
      R"({"kind":"random","params":{"n":6},"seed":11})",
      R"({"kind":"random_block","params":{"d1":2,"d2":3},"seed":7})",
  };
  for (const char* s : specs) {
    for (const char* field : {"rational", "gaussian_rational", "f64", "c64"}) {
      auto j = nlohmann::json::parse(s);
      j["field"] = field;
      CAPTURE(j.dump());
      const auto t = generate(parse_zoo_spec(j));
      CHECK(field_name(field_of(t)) == std::string(field));
      const std::string text = emit_tensor(t);
      CHECK(text.back() == '\n');
      const auto back = parse_tensor(text);
      CHECK(back == t);
      CHECK(emit_tensor(back) == text);
    }
  }
}

TEST_CASE("emit lists nonzero orbit representatives in order") {
  const std::string text = emit_tensor(make_constant_curvature<Rational>(3, q(2)));
  CHECK(text ==
        R"({"dim":3,"entries":[[0,1,0,1,"2"],[0,2,0,2,"2"],[1,2,1,2,"2"]],"field":"rational"})"
        "\n");
  CHECK(emit_tensor(CurvatureTensor<double>(2)) == "{\"dim\":2,\"entries\":[],\"field\":\"f64\"}\n");
}

TEST_CASE("generate matches the library constructors") {
  CHECK(std::get<CurvatureTensor<Rational>>(zoo(R"({"kind":"constant","params":{"n":5,"kappa":1}})")) ==
        make_constant_curvature<Rational>(5, q(1)));
  CHECK(std::get<CurvatureTensor<Rational>>(zoo(R"({"kind":"su3_so3"})")) ==
        su3_so3_tensor<Rational>(q(3, 2)));
  CHECK(std::get<CurvatureTensor<Rational>>(zoo(R"({"kind":"constant","params":{"n":5,"kappa":0.25}})")) ==
        make_constant_curvature<Rational>(5, q(1, 4)));
  CHECK(std::get<CurvatureTensor<Rational>>(
            zoo(R"({"kind":"random_block","params":{"d1":1,"d2":4},"seed":9})")) ==
        random_block_tensor<Rational>(1, 4, 9));
  CHECK(zoo(R"({"kind":"random","params":{"n":5},"seed":3})") ==
        zoo(R"({"kind":"random","params":{"n":5},"seed":3})"));
  CHECK_FALSE(zoo(R"({"kind":"random","params":{"n":5},"seed":3})") ==
              zoo(R"({"kind":"random","params":{"n":5},"seed":4})"));
}

TEST_CASE("invalid zoo specs") {
  auto code = [](const std::string& s) {
    try {
      zoo(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  CHECK(code(R"({"kind":"torus","params":{}})") == ErrorCode::kInvalidArgument);
  CHECK(code(R"({"kind":"constant","params":{"n":5}})") == ErrorCode::kInvalidArgument);
  CHECK(code(R"({"kind":"constant","params":{"n":0,"kappa":1}})") == ErrorCode::kInvalidDimension);
  CHECK(code(R"({"kind":"constant","params":{"n":"5","kappa":1}})") == ErrorCode::kInvalidArgument);
  CHECK(code(R"({"kind":"constant","params":{"n":50,"kappa":1}})") == ErrorCode::kInvalidDimension);
  CHECK(code(R"({"params":{}})") == ErrorCode::kParse);
  CHECK(code(R"({"kind":"random","params":{"n":5},"seed":-1})") == ErrorCode::kParse);
}

TEST_CASE("field conversion") {
  const AnyTensor r = random_tensor<Rational>(5, 2);
  for (Field f : {Field::kRational, Field::kGaussianRational, Field::kF64, Field::kC64})
    CHECK(field_of(convert_field(r, f)) == f);
  const auto g = convert_field(r, Field::kGaussianRational);
  CHECK(convert_field(g, Field::kRational) == r);
  CHECK(std::get<CurvatureTensor<double>>(convert_field(g, Field::kF64)) ==
        std::get<CurvatureTensor<double>>(convert_field(r, Field::kF64)));
  CHECK_THROWS_AS(convert_field(convert_field(r, Field::kF64), Field::kRational), Error);
  const AnyTensor complex = complex_space_form<GaussRational>(2, GaussRational(q(1), q(1)));
  try {
    convert_field(complex, Field::kRational);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedField);
  }
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hash_hex(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
  CHECK(hash_hex(1) == "0000000000000001");
}
