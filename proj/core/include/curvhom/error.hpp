#pragma once

#include <stdexcept>
#include <string>

namespace curvhom {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  SingularMatrix,
  DerivativeOrder,
  NotPositiveDefinite,
  DegeneratePlane,
  IndefinitePlane,
  SamplingFailed,
  Convergence,
  Schema,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can map it onto a check status or an exit code.
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

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) fail(kind, what);
}

}  // namespace curvhom
