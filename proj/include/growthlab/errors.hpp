#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

enum class ErrorCode {
  Domain,
  Overflow,
  Pole,
  PoleOnCircle,
  OnCircle,
  NonIntegralWinding,
  SingularNode,
  NonConvergent,
  BelowDomain,
  NonLevelZero,
  BelowRange,
  DegenerateGrid,
  BadBracket,
  Parse,
  InvalidArgument,
  Unsupported,
};

const char* error_code_name(ErrorCode code);

// Every failure inside the library is reported through this one type; the
// C API maps the code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace growthlab
