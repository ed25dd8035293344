#include "curvature/tensor_io.hpp"

#include <cstdio>
#include <map>

#include "curvature/json_scalar.hpp"
#include "curvature/model_zoo.hpp"

namespace curv {

using nlohmann::json;

namespace {

constexpr int kMaxDim = 32;

Error parse_error(const std::string& what) { return Error(ErrorCode::kParse, what); }

// Exact fields take strings or integers; floats take numbers; c64 also [re, im].
template <typename T>
T scalar_from_json(const json& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return parse_rational(v.dump());
    if (v.is_number_float()) return parse_rational(v.dump());
    throw parse_error("expected a rational string, got " + v.dump());
  } else if constexpr (std::is_same_v<T, GaussRational>) {
    if (v.is_string()) return parse_gauss_rational(v.get<std::string>());
    if (v.is_number()) return GaussRational(parse_rational(v.dump()));
    throw parse_error("expected a gaussian rational string, got " + v.dump());
  } else if constexpr (std::is_same_v<T, double>) {
    if (v.is_number()) return v.get<double>();
    throw parse_error("expected a number, got " + v.dump());
  } else {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return Complex(v[0].get<double>(), v[1].get<double>());
    throw parse_error("expected a number or [re, im], got " + v.dump());
  }
}

template <typename T>
bool same_value(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::kExact) {
    return a == b;
  } else {
    const double scale = std::max(1.0, std::max(ScalarTraits<T>::magnitude(a), ScalarTraits<T>::magnitude(b)));
    return ScalarTraits<T>::magnitude(a - b) <= kDefaultTolerance * scale;
  }
}

std::string index_text(const Index4& idx) {
  return "(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," + std::to_string(idx[2]) +
         "," + std::to_string(idx[3]) + ")";
}

template <typename T>
CurvatureTensor<T> parse_entries(int dim, const json& entries) {
  std::map<Index4, T> reps;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 5) throw parse_error("entry must be [i, j, k, l, value]");
    Index4 idx{};
    for (int p = 0; p < 4; ++p) {
      if (!e[p].is_number_integer()) throw parse_error("entry index must be an integer");
      const long v = e[p].get<long>();
      if (v < 0 || v >= dim)
        throw Error(ErrorCode::kIndexOutOfRange,
                    "index " + std::to_string(v) + " out of range for dim " + std::to_string(dim));
      idx[p] = static_cast<int>(v);
    }
    const T value = scalar_from_json<T>(e[4]);
    const auto rep = orbit_representative(idx);
    const T rep_value = rep.sign < 0 ? T(-value) : value;
    bool degenerate = false;
    for (const auto& m : symmetry_orbit(rep.index))
      if (m.index == rep.index && m.sign < 0) degenerate = true;
    if (degenerate && !ScalarTraits<T>::is_zero(value) && !same_value(value, T(0)))
      throw Error(ErrorCode::kSymmetryConflict,
                  "nonzero value at " + index_text(idx) + " violates antisymmetry");
    if (degenerate) continue;
    auto [it, inserted] = reps.emplace(rep.index, rep_value);
    if (!inserted && !same_value(it->second, rep_value))
      throw Error(ErrorCode::kSymmetryConflict,
                  "inconsistent values on the orbit of " + index_text(idx));
  }
  TensorBuilder<T> b(dim);
  for (const auto& [idx, v] : reps) b.set_orbit(idx[0], idx[1], idx[2], idx[3], v);
  auto t = std::move(b).build();
  const auto report = validate_symmetries(t);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::kSymmetryConflict,
                "entries violate " + v.identity + " at " + index_text(v.index));
  }
  return t;
}

template <typename T>
json emit_entries(const CurvatureTensor<T>& t) {
  json entries = json::array();
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Index4 idx{i, j, k, l};
          if (ScalarTraits<T>::is_zero(t(idx))) continue;
          if (orbit_representative(idx).index != idx) continue;
          entries.push_back(json::array({i, j, k, l, scalar_json(t(idx))}));
        }
  return entries;
}

template <typename To, typename From>
CurvatureTensor<To> map_entries(const CurvatureTensor<From>& t, auto&& f) {
  std::vector<To> out;
  out.reserve(t.dense().size());
  for (const auto& v : t.dense()) out.push_back(f(v));
  return CurvatureTensor<To>::from_dense(t.dim(), std::move(out));
}

long int_param(const json& params, const char* key, long lo = 1) {
  if (!params.contains(key)) throw Error(ErrorCode::kInvalidArgument, std::string("missing parameter '") + key + "'");
  const auto& v = params.at(key);
  if (!v.is_number_integer()) throw Error(ErrorCode::kInvalidArgument, std::string("parameter '") + key + "' must be an integer");
  const long x = v.get<long>();
  if (x < lo) throw Error(ErrorCode::kInvalidDimension, std::string("parameter '") + key + "' is too small");
  return x;
}

template <typename T>
T scalar_param(const json& params, const char* key) {
  if (!params.contains(key)) throw Error(ErrorCode::kInvalidArgument, std::string("missing parameter '") + key + "'");
  const json& v = params.at(key);
  try {
    // Parameters may be exact literals whatever the target field.
    if constexpr (std::is_same_v<T, double>) {
      if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
    } else if constexpr (std::is_same_v<T, Complex>) {
      if (v.is_string()) {
        const auto g = parse_gauss_rational(v.get<std::string>());
        return Complex(g.real().get_d(), g.imag().get_d());
      }
    }
    return scalar_from_json<T>(v);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("parameter '") + key + "': " + e.what());
  }
}

void check_dim(long n) {
  if (n > kMaxDim) throw Error(ErrorCode::kInvalidDimension, "dimension above " + std::to_string(kMaxDim));
}

template <typename T>
CurvatureTensor<T> generate_as(const ZooSpec& spec) {
  const json& p = spec.params;
  const std::string& kind = spec.kind;
  if (kind == "constant") {
    const long n = int_param(p, "n");
    check_dim(n);
    return make_constant_curvature<T>(static_cast<int>(n), scalar_param<T>(p, "kappa"));
  }
  if (kind == "complex_space_form") {
    const long m = int_param(p, "m");
    check_dim(2 * m);
    return complex_space_form<T>(static_cast<int>(m), scalar_param<T>(p, "c"));
  }
  if (kind == "quaternionic_space_form") {
    const long q = int_param(p, "q");
    check_dim(4 * q);
    return quaternionic_space_form<T>(static_cast<int>(q), scalar_param<T>(p, "c"));
  }
  if (kind == "product_spheres") {
    const long a = int_param(p, "p");
    const long b = int_param(p, "q");
    check_dim(a + b);
    return product_sphere_tensor<T>(static_cast<int>(a), static_cast<int>(b), scalar_param<T>(p, "kappa1"),
                                    scalar_param<T>(p, "kappa2"));
  }
  if (kind == "random") {
    const long n = int_param(p, "n", 2);
    check_dim(n);
    return random_tensor<T>(static_cast<int>(n), spec.seed);
  }
  if (kind == "random_block") {
    const long d1 = int_param(p, "d1");
    const long d2 = int_param(p, "d2");
    check_dim(d1 + d2);
    return random_block_tensor<T>(static_cast<int>(d1), static_cast<int>(d2), spec.seed);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown zoo kind '" + kind + "'");
}

json spec_scale(const ZooSpec& spec) {
  if (!spec.params.contains("scale")) return "3/2";
  return spec.params.at("scale");
}

}  // namespace

Field field_of(const AnyTensor& t) {
  return std::visit([](const auto& x) { return x.field(); }, t);
}

int dim_of(const AnyTensor& t) {
  return std::visit([](const auto& x) { return x.dim(); }, t);
}

AnyTensor parse_tensor(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("tensor JSON must be an object");
  for (const char* key : {"dim", "field", "entries"})
    if (!j.contains(key)) throw parse_error(std::string("missing key '") + key + "'");
  if (!j["dim"].is_number_integer()) throw parse_error("dim must be an integer");
  const long dim = j["dim"].get<long>();
  if (dim < 1 || dim > kMaxDim)
    throw Error(ErrorCode::kInvalidDimension, "dim must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (!j["field"].is_string()) throw parse_error("field must be a string");
  if (!j["entries"].is_array()) throw parse_error("entries must be an array");
  const int n = static_cast<int>(dim);
  switch (parse_field(j["field"].get<std::string>())) {
    case Field::kRational: return parse_entries<Rational>(n, j["entries"]);
    case Field::kGaussianRational: return parse_entries<GaussRational>(n, j["entries"]);
    case Field::kF64: return parse_entries<double>(n, j["entries"]);
    case Field::kC64: return parse_entries<Complex>(n, j["entries"]);
  }
  throw Error(ErrorCode::kInternal, "unreachable field");
}

std::string emit_tensor(const AnyTensor& t) {
  json j;
  j["dim"] = dim_of(t);
  j["field"] = field_name(field_of(t));
  j["entries"] = std::visit([](const auto& x) { return emit_entries(x); }, t);
  return j.dump() + "\n";
}

AnyTensor convert_field(const AnyTensor& t, Field target) {
  const Field source = field_of(t);
  if (source == target) return t;
  if (const auto* r = std::get_if<CurvatureTensor<Rational>>(&t)) {
    switch (target) {
      case Field::kGaussianRational:
        return map_entries<GaussRational>(*r, [](const Rational& v) { return GaussRational(v); });
      case Field::kF64: return map_entries<double>(*r, [](const Rational& v) { return v.get_d(); });
      case Field::kC64:
        return map_entries<Complex>(*r, [](const Rational& v) { return Complex(v.get_d(), 0.0); });
      default: break;
    }
  }
  if (const auto* g = std::get_if<CurvatureTensor<GaussRational>>(&t)) {
    if (target == Field::kC64)
      return map_entries<Complex>(*g, [](const GaussRational& v) {
        return Complex(v.real().get_d(), v.imag().get_d());
      });
    const bool real = std::all_of(g->dense().begin(), g->dense().end(),
                                  [](const GaussRational& v) { return sgn(v.imag()) == 0; });
    if (real) {
      AnyTensor r = map_entries<Rational>(*g, [](const GaussRational& v) { return v.real(); });
      return convert_field(r, target);
    }
  }
  if (const auto* d = std::get_if<CurvatureTensor<double>>(&t); d && target == Field::kC64)
    return map_entries<Complex>(*d, [](double v) { return Complex(v, 0.0); });
  throw Error(ErrorCode::kUnsupportedField, std::string("cannot convert ") + field_name(source) + " to " +
                                                field_name(target) + " without loss");
}

ZooSpec parse_zoo_spec(const json& j) {
  if (!j.is_object()) throw parse_error("zoo spec must be an object");
  ZooSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string()) throw parse_error("zoo spec needs a string 'kind'");
  spec.kind = j["kind"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw parse_error("'params' must be an object");
    spec.params = j["params"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) throw parse_error("'seed' must be an integer");
    if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0) throw parse_error("'seed' must be nonnegative");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("field")) {
    if (!j["field"].is_string()) throw parse_error("'field' must be a string");
    spec.field = parse_field(j["field"].get<std::string>());
  }
  return spec;
}

AnyTensor generate(const ZooSpec& spec) {
  if (spec.kind == "su3_so3") {
    const json scale = spec_scale(spec);
    const json wrapped = {{"scale", scale}};
    if (spec.field == Field::kF64) return su3_so3_tensor<double>(scalar_param<double>(wrapped, "scale"));
    AnyTensor exact = su3_so3_tensor<Rational>(scalar_param<Rational>(wrapped, "scale"));
    return convert_field(exact, spec.field);
  }
  switch (spec.field) {
    case Field::kRational: return generate_as<Rational>(spec);
    case Field::kGaussianRational: return generate_as<GaussRational>(spec);
    case Field::kF64: return generate_as<double>(spec);
    case Field::kC64: return generate_as<Complex>(spec);
  }
  throw Error(ErrorCode::kInternal, "unreachable field");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace curv
