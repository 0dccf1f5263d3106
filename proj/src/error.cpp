#include "qsdp/error.hpp"

namespace qsdp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotComparable: return "NotComparable";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::NotStrictlyFeasible: return "NotStrictlyFeasible";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::RankDeficientConstraints: return "RankDeficientConstraints";
    case ErrorKind::RescaleFailure: return "RescaleFailure";
    case ErrorKind::LeftCone: return "LeftCone";
    case ErrorKind::InitNotOnPath: return "InitNotOnPath";
  }
  return "Unknown";
}

}  // namespace qsdp
