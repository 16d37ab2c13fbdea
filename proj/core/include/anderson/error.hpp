#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anderson {

enum class ErrorKind {
  NonFinite,
  NonConvergence,
  SingularA,
  InvalidProblem,
  InvalidArgument,
  EvalError,
  Breakdown,
  StagnationDetected,
  InsufficientData,
  MissingJacobian,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. Every failure the core reports carries a kind so
/// callers (the CLI in particular) can map it onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace anderson
