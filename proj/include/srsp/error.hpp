#pragma once

#include <stdexcept>
#include <string>

namespace srsp {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  OutOfRange,
  Parse,
  Constraint,
  Io,
  Format,
  BlowUp,
  VerificationFailed,
};

/// Short stable identifier used as the prefix of machine-parsable error lines.
const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace srsp
