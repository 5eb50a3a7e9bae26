#pragma once

#include <stdexcept>
#include <string>

namespace racbem {

/// Failure categories shared by the C++ core, the C API status codes and the
/// CLI exit codes.
enum class ErrorCode {
  InvalidArgument = 2,
  DimensionMismatch = 3,
  CapExceeded = 4,
  DegeneratePostselection = 5,
  NonConvergence = 6,
  Infeasible = 7,
  Io = 8,
  Parse = 9,
  Schema = 10,
  Internal = 11,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace racbem
