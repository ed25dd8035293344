#include "curvature/curvature.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include "curvature/reports.hpp"

struct curv_tensor {
  curv::AnyTensor value;
};

namespace {

thread_local std::string last_error;

curv_status status_of(curv::ErrorCode code) {
  using curv::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidDimension: return CURV_INVALID_DIMENSION;
    case ErrorCode::kInvalidArgument: return CURV_INVALID_ARGUMENT;
    case ErrorCode::kParse: return CURV_PARSE;
    case ErrorCode::kIndexOutOfRange: return CURV_INDEX_RANGE;
    case ErrorCode::kSymmetryConflict: return CURV_SYMMETRY_CONFLICT;
    case ErrorCode::kPrecondition: return CURV_PRECONDITION;
    case ErrorCode::kCombinatorialGuard: return CURV_COMBINATORIAL_GUARD;
    case ErrorCode::kIdentityViolation: return CURV_IDENTITY_VIOLATION;
    case ErrorCode::kUnsupportedField: return CURV_UNSUPPORTED;
    case ErrorCode::kInternal: return CURV_INTERNAL;
  }
  return CURV_INTERNAL;
}

template <typename F>
curv_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const curv::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CURV_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CURV_INTERNAL;
  }
}

curv_status invalid(const char* what) {
  last_error = what;
  return CURV_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

curv::RunOptions run_options(const curv_options* opts) {
  curv_options defaults;
  curv_options_init(&defaults);
  const curv_options& o = opts ? *opts : defaults;
  if (!(o.tolerance > 0)) throw curv::Error(curv::ErrorCode::kInvalidArgument, "tolerance must be positive");
  if (o.samples < 1) throw curv::Error(curv::ErrorCode::kInvalidArgument, "samples must be at least 1");
  curv::RunOptions r;
  r.tolerance = o.tolerance;
  r.seed = o.seed;
  r.samples = o.samples;
  if (o.d1 != 0 || o.d2 != 0) r.split = curv::BlockSplit(o.d1, o.d2);
  if (o.input_hash) r.input_hash = o.input_hash;
  return r;
}

curv_tensor* wrap(curv::AnyTensor t) { return new curv_tensor{std::move(t)}; }

}  // namespace

extern "C" {

const char* curv_version(void) { return curv::kToolVersion; }

const char* curv_last_error(void) { return last_error.c_str(); }

const char* curv_status_name(curv_status status) {
  switch (status) {
    case CURV_OK: return "ok";
    case CURV_INVALID_ARGUMENT: return "invalid_argument";
    case CURV_PARSE: return "parse";
    case CURV_INDEX_RANGE: return "index_out_of_range";
    case CURV_SYMMETRY_CONFLICT: return "symmetry_conflict";
    case CURV_INVALID_DIMENSION: return "invalid_dimension";
    case CURV_PRECONDITION: return "precondition";
    case CURV_COMBINATORIAL_GUARD: return "combinatorial_guard";
    case CURV_IDENTITY_VIOLATION: return "identity_violation";
    case CURV_UNSUPPORTED: return "unsupported";
    case CURV_INTERNAL: return "internal";
    case CURV_IO: return "io";
  }
  return "unknown";
}

void curv_options_init(curv_options* opts) {
  if (!opts) return;
  opts->tolerance = curv::kDefaultTolerance;
  opts->seed = 0;
  opts->samples = 200;
  opts->d1 = 0;
  opts->d2 = 0;
  opts->input_hash = nullptr;
}

curv_status curv_tensor_parse(const char* json, curv_tensor** out) {
  if (!json || !out) return invalid("null argument");
  return guarded([&] {
    *out = wrap(curv::parse_tensor(json));
    return CURV_OK;
  });
}

curv_status curv_tensor_generate(const char* spec_json, curv_tensor** out) {
  if (!spec_json || !out) return invalid("null argument");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::exception& e) {
      throw curv::Error(curv::ErrorCode::kParse, std::string("malformed zoo spec: ") + e.what());
    }
    *out = wrap(curv::generate(curv::parse_zoo_spec(j)));
    return CURV_OK;
  });
}

curv_status curv_tensor_emit(const curv_tensor* t, char** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] {
    *out = copy_string(curv::emit_tensor(t->value));
    return CURV_OK;
  });
}

void curv_tensor_free(curv_tensor* t) { delete t; }

int curv_tensor_dim(const curv_tensor* t) { return t ? curv::dim_of(t->value) : -1; }

curv_field curv_tensor_field(const curv_tensor* t) {
  return t ? static_cast<curv_field>(curv::field_of(t->value)) : CURV_FIELD_RATIONAL;
}

curv_status curv_tensor_convert(const curv_tensor* t, curv_field field, curv_tensor** out) {
  if (!t || !out) return invalid("null argument");
  if (field < CURV_FIELD_RATIONAL || field > CURV_FIELD_C64) return invalid("unknown field");
  return guarded([&] {
    *out = wrap(curv::convert_field(t->value, static_cast<curv::Field>(field)));
    return CURV_OK;
  });
}

curv_status curv_tensor_shift(const curv_tensor* t, curv_tensor** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] {
    *out = wrap(std::visit([](const auto& x) { return curv::AnyTensor(curv::shift(x)); }, t->value));
    return CURV_OK;
  });
}

curv_status curv_tensor_validate(const curv_tensor* t, double tolerance, int* violations) {
  if (!t || !violations) return invalid("null argument");
  return guarded([&] {
    const auto report =
        std::visit([&](const auto& x) { return curv::validate_symmetries(x, tolerance); }, t->value);
    *violations = static_cast<int>(report.violations.size());
    return CURV_OK;
  });
}

curv_status curv_check(const curv_tensor* t, const char* checks_csv, const curv_options* opts, char** report,
                       int* passed) {
  if (!t || !checks_csv || !report || !passed) return invalid("null argument");
  return guarded([&] {
    const auto options = run_options(opts);
    std::vector<std::string> checks;
    std::stringstream ss(checks_csv);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) checks.push_back(item);
    if (checks.empty()) throw curv::Error(curv::ErrorCode::kInvalidArgument, "no checks requested");
    std::string lines;
    bool all = true;
    for (const auto& c : checks) {
      const auto r = curv::check_report(t->value, c, options);
      all = all && r["passed"].get<bool>();
      lines += r.dump() + "\n";
    }
    *report = copy_string(lines);
    *passed = all ? 1 : 0;
    return CURV_OK;
  });
}

curv_status curv_certify(const curv_tensor* t, const curv_options* opts, char** trace, int* verdict) {
  if (!t || !trace || !verdict) return invalid("null argument");
  return guarded([&] {
    const auto r = curv::certify_report(t->value, run_options(opts));
    *trace = copy_string(r.dump() + "\n");
    *verdict = r["passed"].get<bool>() ? 1 : 0;
    return CURV_OK;
  });
}

curv_status curv_identities(int d1, int d2, int seeds, const curv_options* opts, char** cert, int* passed) {
  if (!cert || !passed) return invalid("null argument");
  return guarded([&] {
    const auto r = curv::identities_certificate(d1, d2, seeds, run_options(opts));
    *cert = copy_string(r.dump() + "\n");
    *passed = r["passed"].get<bool>() ? 1 : 0;
    return CURV_OK;
  });
}

uint64_t curv_fnv1a64(const char* bytes, uint64_t length) {
  if (!bytes) return curv::fnv1a64({});
  return curv::fnv1a64(std::string_view(bytes, static_cast<size_t>(length)));
}

void curv_string_free(char* s) { std::free(s); }

}  // extern "C"
