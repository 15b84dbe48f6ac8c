// error.hpp
// Exception type shared by every module. The kind maps onto CLI exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace hqaoa {

enum class ErrorKind {
  InvalidArgument,  // malformed spec, schedule, config or precondition breach
  SizeLimit,        // exhaustive enumeration refused
  Numerical,        // non-finite values, undefined ratios or correlations
  Unreachable,      // cost with zero class probability
  OutOfRange,       // instance cost outside the cost set
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

/// Process exit code for an error kind: 2 invalid config, 3 size refusal,
/// 4 numerical failure.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
    case ErrorKind::Io:
      return 2;
    case ErrorKind::SizeLimit:
      return 3;
    case ErrorKind::Numerical:
    case ErrorKind::Unreachable:
      return 4;
  }
  return 1;
}

}  // namespace hqaoa
