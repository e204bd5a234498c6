#pragma once

#include <stdexcept>
#include <string>

namespace barriers {

enum class ErrorCode {
  InvalidInput = 1,
  DegenerateInput,
  UnsupportedGrade,
  ZeroTangent,
  InvalidDirection,
  DegenerateFlag,
  InsufficientSampling,
  NotOnQuadric,
  ChartDomain,
  ImmersionDegeneracy,
  Config,
  StalledFlow,
};

const char* error_name(ErrorCode code) noexcept;

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

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) throw Error(code, what);
}

}  // namespace barriers
