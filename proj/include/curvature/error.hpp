#pragma once

#include <stdexcept>
#include <string>

namespace curv {

enum class ErrorCode {
  kInvalidDimension,
  kInvalidArgument,
  kParse,
  kIndexOutOfRange,
  kSymmetryConflict,
  kPrecondition,
  kCombinatorialGuard,
  kIdentityViolation,
  kUnsupportedField,
  kInternal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A named hypothesis or precondition of a check failed.
class PreconditionError : public Error {
 public:
  PreconditionError(std::string hypothesis, const std::string& what)
      : Error(ErrorCode::kPrecondition, what), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace curv
