#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvature/conditions.hpp"
#include "curvature/tensor_io.hpp"

namespace curv {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  int samples = 200;
  std::optional<BlockSplit> split;
  std::string input_hash;  // hex FNV-1a of the input bytes
};

/// {"tool", "version", "prng", "command", "config", "input_hash"}
nlohmann::json report_meta(const std::string& command, const RunOptions& options);

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {"symmetries", "einstein", "two_stein",
                                                 "hc2", "block", "shift_equiv"};
  return names;
}

/// One report per check: {"check", "verdict", "passed", "residuals", "seed",
/// "tolerance", "meta", ...}. Throws kPrecondition for "block" without a split
/// and kUnsupportedField for complex tensors outside "symmetries".
nlohmann::json check_report(const AnyTensor& t, const std::string& check, const RunOptions& options);

/// Shifts R, runs the deduction on cR and returns the proof trace with
/// "verdict", "passed", "failing_hypothesis", "c" and "kappa" = c + 2.
/// Throws kUnsupportedField for n < 5 or complex fields.
nlohmann::json certify_report(const AnyTensor& r, const RunOptions& options);

/// Exact identity certificate over `seeds` random rational block tensors.
nlohmann::json identities_certificate(int d1, int d2, int seeds, const RunOptions& options);

}  // namespace curv
