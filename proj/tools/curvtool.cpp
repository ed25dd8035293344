#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvature/curvature.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Config {
  double tolerance = 1e-10;
  uint64_t seed = 0;
  bool seed_given = false;
  int samples = 200;
  std::string field;
  std::vector<int> split;
  std::string out;
  std::string input;
  std::string checks;
  int seeds = 50;
};

struct CliError {
  int exit_code;
  std::string message;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitUsage, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliError{kExitUsage, "cannot write '" + path + "'"};
}

void require(curv_status s) {
  if (s != CURV_OK)
    throw CliError{s == CURV_IDENTITY_VIOLATION ? kExitFail : kExitUsage,
                   std::string(curv_status_name(s)) + ": " + curv_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  curv_string_free(s);
  return out;
}

std::string hash_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(curv_fnv1a64(bytes.data(), bytes.size())));
  return buf;
}

curv_field field_from_name(const std::string& name) {
  if (name == "rational") return CURV_FIELD_RATIONAL;
  if (name == "gaussian_rational") return CURV_FIELD_GAUSSIAN_RATIONAL;
  if (name == "f64") return CURV_FIELD_F64;
  if (name == "c64") return CURV_FIELD_C64;
  throw CliError{kExitUsage, "unknown field '" + name + "'"};
}

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(curv_tensor* t) : t_(t) {}
  Tensor(Tensor&& o) noexcept : t_(o.t_) { o.t_ = nullptr; }
  Tensor(const Tensor&) = delete;
  Tensor& operator=(const Tensor&) = delete;
  Tensor& operator=(Tensor&& o) noexcept {
    std::swap(t_, o.t_);
    return *this;
  }
  ~Tensor() { curv_tensor_free(t_); }
  curv_tensor* get() const { return t_; }
  curv_tensor** out() { return &t_; }

 private:
  curv_tensor* t_ = nullptr;
};

curv_options options_of(const Config& c, const std::string& hash) {
  curv_options o;
  curv_options_init(&o);
  o.tolerance = c.tolerance;
  o.seed = c.seed;
  o.samples = c.samples;
  if (c.split.size() == 2) {
    o.d1 = c.split[0];
    o.d2 = c.split[1];
  }
  o.input_hash = hash.c_str();
  return o;
}

Tensor load_tensor(const Config& c, std::string& hash) {
  const std::string text = read_input(c.input);
  hash = hash_hex(text);
  Tensor t;
  require(curv_tensor_parse(text.c_str(), t.out()));
  if (!c.field.empty()) {
    Tensor converted;
    require(curv_tensor_convert(t.get(), field_from_name(c.field), converted.out()));
    t = std::move(converted);
  }
  return t;
}

int cmd_generate(const Config& c) {
  const std::string raw = c.input.rfind('{', 0) == 0 ? c.input : read_input(c.input);
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    throw CliError{kExitUsage, std::string("malformed zoo spec: ") + e.what()};
  }
  if (!spec.is_object()) throw CliError{kExitUsage, "zoo spec must be a JSON object"};
  if (c.seed_given) spec["seed"] = c.seed;
  if (!c.field.empty()) spec["field"] = c.field;
  Tensor t;
  require(curv_tensor_generate(spec.dump().c_str(), t.out()));
  char* text = nullptr;
  require(curv_tensor_emit(t.get(), &text));
  const std::string out = take(text);
  write_output(c.out, out);
  int violations = 0;
  require(curv_tensor_validate(t.get(), c.tolerance, &violations));
  std::cerr << "generated " << spec.value("kind", "?") << " n=" << curv_tensor_dim(t.get())
            << " hash=" << hash_hex(out) << ": "
            << (violations == 0 ? "symmetries valid" : std::to_string(violations) + " symmetry violations")
            << "\n";
  return violations == 0 ? kExitPass : kExitFail;
}

int cmd_check(const Config& c) {
  std::string hash;
  Tensor t = load_tensor(c, hash);
  std::string checks = c.checks;
  if (checks.empty()) {
    const bool complex = curv_tensor_field(t.get()) == CURV_FIELD_GAUSSIAN_RATIONAL ||
                         curv_tensor_field(t.get()) == CURV_FIELD_C64;
    checks = complex ? "symmetries" : "symmetries,einstein,two_stein,hc2,shift_equiv";
    if (c.split.size() == 2) checks += ",block";
  }
  const curv_options o = options_of(c, hash);
  char* report = nullptr;
  int passed = 0;
  require(curv_check(t.get(), checks.c_str(), &o, &report, &passed));
  const std::string lines = take(report);
  write_output(c.out, lines);
  std::istringstream in(lines);
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    std::cerr << (j["passed"].get<bool>() ? "PASS " : "FAIL ") << j["check"].get<std::string>() << ": "
              << j["verdict"].get<std::string>() << " " << j["residuals"].dump() << "\n";
  }
  return passed ? kExitPass : kExitFail;
}

int cmd_certify(const Config& c) {
  if (c.split.size() != 2) throw CliError{kExitUsage, "certify needs --split d1 d2"};
  std::string hash;
  Tensor t = load_tensor(c, hash);
  const curv_options o = options_of(c, hash);
  char* trace = nullptr;
  int verdict = 0;
  require(curv_certify(t.get(), &o, &trace, &verdict));
  const std::string text = take(trace);
  write_output(c.out, text);
  const auto j = nlohmann::json::parse(text);
  if (verdict) {
    std::cerr << "constant curvature: cR = " << j["c"].dump() << ", R = " << j["kappa"].dump() << "\n";
  } else if (!j["failing_hypothesis"].is_null()) {
    std::cerr << "hypothesis failed: " << j["failing_hypothesis"].get<std::string>() << "\n";
  } else {
    std::cerr << "not constant curvature: " << j.value("violation", std::string("unknown")) << "\n";
  }
  return verdict ? kExitPass : kExitFail;
}

int cmd_identities(const Config& c) {
  if (c.split.size() != 2) throw CliError{kExitUsage, "identities needs --split d1 d2"};
  const std::string hash = hash_hex("identities " + std::to_string(c.split[0]) + " " +
                                    std::to_string(c.split[1]) + " " + std::to_string(c.seeds));
  const curv_options o = options_of(c, hash);
  char* cert = nullptr;
  int passed = 0;
  require(curv_identities(c.split[0], c.split[1], c.seeds, &o, &cert, &passed));
  const std::string text = take(cert);
  write_output(c.out, text);
  const auto s = nlohmann::json::parse(text)["summary"];
  std::cerr << s["comparisons"].get<int>() << " comparisons, " << s["failed"].get<int>() << " failed, "
            << s["formula_only"].get<int>() << " formula-only\n";
  return passed ? kExitPass : kExitFail;
}

void common_flags(CLI::App* sub, Config& c, bool tensor_flags) {
  sub->add_option("--tolerance", c.tolerance, "Absolute tolerance for float fields")
      ->check(CLI::PositiveNumber);
  sub->add_option_function<uint64_t>(
      "--seed", [&c](const uint64_t& s) { c.seed = s; c.seed_given = true; }, "Master seed");
  sub->add_option("--out", c.out, "Output file (default stdout)");
  if (tensor_flags) {
    sub->add_option("--samples", c.samples, "Random pairs for hc2 and shift_equiv")->check(CLI::PositiveNumber);
    sub->add_option("--field", c.field, "Convert the tensor to this field first")
        ->check(CLI::IsMember({"rational", "gaussian_rational", "f64", "c64"}));
  }
  sub->add_option("--split", c.split, "Block split d1 d2")->expected(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic curvature tensor toolkit"};
  app.set_version_flag("--version", std::string(curv_version()));
  app.require_subcommand(1);
  Config c;

  auto* gen = app.add_subcommand("generate", "Write a model tensor from a zoo spec");
  gen->add_option("spec", c.input, "Zoo spec JSON, inline or a file path")->required();
  common_flags(gen, c, false);
  gen->add_option("--field", c.field, "Scalar field of the generated tensor")
      ->check(CLI::IsMember({"rational", "gaussian_rational", "f64", "c64"}));

  auto* check = app.add_subcommand("check", "Evaluate curvature conditions");
  check->add_option("tensor", c.input, "Tensor JSON file")->required();
  check->add_option("--checks", c.checks,
                    "Comma separated: symmetries,einstein,two_stein,hc2,block,shift_equiv");
  common_flags(check, c, true);

  auto* certify = app.add_subcommand("certify", "Run the constant curvature deduction on the shifted tensor");
  certify->add_option("tensor", c.input, "Tensor JSON file")->required();
  common_flags(certify, c, true);

  auto* ident = app.add_subcommand("identities", "Certify the symmetrization identities on random block tensors");
  ident->add_option("--seeds", c.seeds, "Number of random tensors")->check(CLI::PositiveNumber);
  common_flags(ident, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(c);
    if (check->parsed()) return cmd_check(c);
    if (certify->parsed()) return cmd_certify(c);
    return cmd_identities(c);
  } catch (const CliError& e) {
    std::cerr << "curvtool: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "curvtool: " << e.what() << "\n";
    return kExitUsage;
  }
}
