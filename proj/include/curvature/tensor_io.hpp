#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "curvature/tensor.hpp"

namespace curv {

using AnyTensor = std::variant<CurvatureTensor<Rational>, CurvatureTensor<GaussRational>,
                               CurvatureTensor<double>, CurvatureTensor<Complex>>;

Field field_of(const AnyTensor& t);
int dim_of(const AnyTensor& t);

/// Tensor JSON: {"dim": n, "field": ..., "entries": [[i, j, k, l, value], ...]}.
/// Entries may be any generating set; each value is spread over its symmetry
/// orbit. Throws kParse, kIndexOutOfRange, kInvalidDimension or
/// kSymmetryConflict (inconsistent orbit values or a Bianchi failure).
AnyTensor parse_tensor(std::string_view text);

/// Canonical form: orbit representatives with nonzero value, sorted, one line.
std::string emit_tensor(const AnyTensor& t);

template <typename T>
std::string emit_tensor(const CurvatureTensor<T>& t) {
  return emit_tensor(AnyTensor(t));
}

/// Exact embeddings (rational into the others, real into complex) and the
/// reverse when no information is lost. Throws kUnsupportedField otherwise.
AnyTensor convert_field(const AnyTensor& t, Field target);

/// {"kind": ..., "params": {...}, "seed": k, "field": ...}
struct ZooSpec {
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  Field field = Field::kRational;
};

ZooSpec parse_zoo_spec(const nlohmann::json& j);
AnyTensor generate(const ZooSpec& spec);

/// FNV-1a 64-bit, rendered as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace curv
