#include <doctest.h>

#include <json.hpp>
#include <string>
#include <thread>

#include "curvature/curvature.h"

using nlohmann::json;

namespace {

struct Owned {
  curv_tensor* t = nullptr;
  ~Owned() { curv_tensor_free(t); }
};

std::string take(char* s) {
  std::string out(s);
  curv_string_free(s);
  return out;
}

curv_options options(int d1 = 0, int d2 = 0) {
  curv_options o;
  curv_options_init(&o);
  o.d1 = d1;
  o.d2 = d2;
  o.input_hash = "feedface";
  return o;
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> out;
  size_t start = 0;
  for (size_t end; (end = text.find('\n', start)) != std::string::npos; start = end + 1)
    out.push_back(json::parse(text.substr(start, end - start)));
  return out;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(curv_status_name(CURV_OK)) == "ok");
  CHECK(std::string(curv_status_name(CURV_SYMMETRY_CONFLICT)) == "symmetry_conflict");
  CHECK(std::string(curv_version()) == "0.1.0");
}

TEST_CASE("parse, inspect, emit, free") {
  Owned t;
  REQUIRE(curv_tensor_parse(R"({"dim":2,"field":"rational","entries":[[1,0,1,0,"1"]]})", &t.t) == CURV_OK);
  CHECK(curv_tensor_dim(t.t) == 2);
  CHECK(curv_tensor_field(t.t) == CURV_FIELD_RATIONAL);
  char* text = nullptr;
  REQUIRE(curv_tensor_emit(t.t, &text) == CURV_OK);
  CHECK(take(text) == "{\"dim\":2,\"entries\":[[0,1,0,1,\"1\"]],\"field\":\"rational\"}\n");
  int violations = -1;
  CHECK(curv_tensor_validate(t.t, 1e-10, &violations) == CURV_OK);
  CHECK(violations == 0);
}

TEST_CASE("errors map to status codes and set the thread-local message") {
  curv_tensor* t = nullptr;
  CHECK(curv_tensor_parse("{", &t) == CURV_PARSE);
  CHECK(std::string(curv_last_error()).find("malformed") != std::string::npos);
  CHECK(t == nullptr);
  CHECK(curv_tensor_parse(R"({"dim":2,"field":"rational","entries":[[0,3,0,1,"1"]]})", &t) ==
        CURV_INDEX_RANGE);
  CHECK(curv_tensor_parse(R"({"dim":4,"field":"rational","entries":[[0,1,2,3,"1"]]})", &t) ==
        CURV_SYMMETRY_CONFLICT);
  CHECK(curv_tensor_parse(nullptr, &t) == CURV_INVALID_ARGUMENT);
  CHECK(curv_tensor_generate(R"({"kind":"nope"})", &t) == CURV_INVALID_ARGUMENT);
  std::string other;
  std::thread([&] { other = curv_last_error(); }).join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(curv_last_error()).empty());
}

TEST_CASE("generate, convert and shift") {
  Owned c, f, s;
  REQUIRE(curv_tensor_generate(R"({"kind":"constant","params":{"n":5,"kappa":5}})", &c.t) == CURV_OK);
  REQUIRE(curv_tensor_convert(c.t, CURV_FIELD_F64, &f.t) == CURV_OK);
  CHECK(curv_tensor_field(f.t) == CURV_FIELD_F64);
  curv_tensor* bad = nullptr;
  CHECK(curv_tensor_convert(f.t, CURV_FIELD_RATIONAL, &bad) == CURV_UNSUPPORTED);
  REQUIRE(curv_tensor_shift(c.t, &s.t) == CURV_OK);
  char* text = nullptr;
  REQUIRE(curv_tensor_emit(s.t, &text) == CURV_OK);
  CHECK(take(text).find("[0,1,0,1,\"3\"]") != std::string::npos);
}

TEST_CASE("check reports one line per check with the header fields") {
  Owned t;
  REQUIRE(curv_tensor_generate(R"({"kind":"constant","params":{"n":5,"kappa":1}})", &t.t) == CURV_OK);
  auto o = options(1, 4);
  char* report = nullptr;
  int passed = -1;
  REQUIRE(curv_check(t.t, "symmetries,einstein,two_stein,hc2,block,shift_equiv", &o, &report, &passed) ==
          CURV_OK);
  CHECK(passed == 1);
  const auto ls = lines(take(report));
  REQUIRE(ls.size() == 6);
  for (const auto& l : ls) {
    for (const char* key : {"check", "verdict", "passed", "residuals", "seed", "tolerance", "meta"})
      CHECK(l.contains(key));
    CHECK(l["meta"]["input_hash"] == "feedface");
    CHECK(l["meta"]["version"] == "0.1.0");
    CHECK(l["passed"] == true);
  }
  CHECK(ls[2]["f2"] == "4");

  Owned r;
  REQUIRE(curv_tensor_generate(R"({"kind":"random","params":{"n":5},"seed":3})", &r.t) == CURV_OK);
  REQUIRE(curv_check(r.t, "two_stein", &o, &report, &passed) == CURV_OK);
  CHECK(passed == 0);
  CHECK(lines(take(report))[0]["residuals"]["residual2"].get<double>() > 0);

  auto nosplit = options();
  CHECK(curv_check(t.t, "block", &nosplit, &report, &passed) == CURV_PRECONDITION);
  CHECK(curv_check(t.t, "bogus", &o, &report, &passed) == CURV_INVALID_ARGUMENT);
  o.samples = 0;
  CHECK(curv_check(t.t, "hc2", &o, &report, &passed) == CURV_INVALID_ARGUMENT);
}

TEST_CASE("check reports are deterministic") {
  Owned t;
  REQUIRE(curv_tensor_generate(R"({"kind":"random","params":{"n":5},"seed":8,"field":"f64"})", &t.t) ==
          CURV_OK);
  auto o = options();
  o.samples = 20;
  o.seed = 99;
  char* a = nullptr;
  char* b = nullptr;
  int pa = 0, pb = 0;
  REQUIRE(curv_check(t.t, "hc2,shift_equiv", &o, &a, &pa) == CURV_OK);
  REQUIRE(curv_check(t.t, "hc2,shift_equiv", &o, &b, &pb) == CURV_OK);
  CHECK(take(a) == take(b));
  CHECK(pa == pb);
}

TEST_CASE("certify verdicts") {
  auto run = [](const char* spec, int d1, int d2, json& trace) {
    Owned t;
    REQUIRE(curv_tensor_generate(spec, &t.t) == CURV_OK);
    auto o = options(d1, d2);
    char* text = nullptr;
    int verdict = -1;
    const curv_status s = curv_certify(t.t, &o, &text, &verdict);
    if (s == CURV_OK) trace = json::parse(take(text));
    return s == CURV_OK ? verdict : -static_cast<int>(s);
  };
  json trace;
  CHECK(run(R"({"kind":"constant","params":{"n":5,"kappa":5}})", 2, 3, trace) == 1);
  CHECK(trace["c"] == "3");
  CHECK(trace["kappa"] == "5");
  CHECK(trace["verdict"] == "constant_curvature");
  CHECK(trace["stages"].size() >= 8);
  CHECK(run(R"({"kind":"su3_so3"})", 1, 4, trace) == 0);
  CHECK(trace["failing_hypothesis"] == "block_condition");
  CHECK(run(R"({"kind":"random_block","params":{"d1":2,"d2":3},"seed":7})", 2, 3, trace) == 0);
  CHECK(trace["failing_hypothesis"] == "two_stein");
  CHECK(run(R"({"kind":"constant","params":{"n":4,"kappa":1}})", 2, 2, trace) == -CURV_UNSUPPORTED);
  CHECK(run(R"({"kind":"constant","params":{"n":5,"kappa":1},"field":"c64"})", 2, 3, trace) ==
        -CURV_UNSUPPORTED);
  CHECK(run(R"({"kind":"constant","params":{"n":5,"kappa":1}})", 0, 0, trace) == -CURV_PRECONDITION);
  CHECK(run(R"({"kind":"constant","params":{"n":6,"kappa":"-1/2"},"field":"f64"})", 3, 3, trace) == 1);
  CHECK(trace["kappa"].get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("identities certificate") {
  auto o = options();
  char* text = nullptr;
  int passed = -1;
  REQUIRE(curv_identities(3, 3, 2, &o, &text, &passed) == CURV_OK);
  CHECK(passed == 1);
  const auto cert = json::parse(take(text));
  CHECK(cert["summary"]["failed"] == 0);
  bool saw_witness = false;
  for (const auto& c : cert["comparisons"])
    if (c["comparison"] == "q4_psd_witness") {
      saw_witness = true;
      CHECK(c["determinant_w1"] == "20");
      CHECK(c["determinant_w2"] == "20");
    }
  CHECK(saw_witness);
  CHECK(curv_identities(2, 2, 1, &o, &text, &passed) == CURV_INVALID_DIMENSION);
  CHECK(curv_identities(2, 3, 0, &o, &text, &passed) == CURV_INVALID_ARGUMENT);
}

TEST_CASE("hash helper") {
  CHECK(curv_fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
  CHECK(curv_fnv1a64(nullptr, 0) == 0xcbf29ce484222325ULL);
}
