#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ake {

/// Failure classes. The CLI maps each class onto a fixed exit code.
enum class ErrorKind {
  InvalidArgument,     // bad parameter value or violated precondition
  DimensionMismatch,
  NotSymmetric,
  NumericalFailure,
  InsufficientRank,
  DegenerateData,
  UnsupportedKernel,
  ParseError,
  Io,
  Format,              // model file version / schema mismatch
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace ake
