#include "anderson/error.hpp"

namespace anderson {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SingularA: return "SingularA";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::Breakdown: return "Breakdown";
    case ErrorKind::StagnationDetected: return "StagnationDetected";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::MissingJacobian: return "MissingJacobian";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace anderson
