#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace detvar {

enum class ErrorKind {
  ShapeMismatch,
  NotHermitian,
  NotPositive,
  TraceNotOne,
  NotNormalized,
  NonPositiveWeight,
  NonFinite,
  IndexOutOfRange,
  KOutOfRange,
  CombinatorialBlowup,
  DegreeZero,
  EnsembleMismatch,
  NotPure,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries the violated invariant as a
/// kind plus a message that includes the violation magnitude where one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace detvar
