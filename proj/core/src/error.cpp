#include "horolab/error.hpp"

namespace horolab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::InvalidDirection: return "InvalidDirection";
    case ErrorKind::MissingRepresentative: return "MissingRepresentative";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::NotInFlat: return "NotInFlat";
    case ErrorKind::NotOpposite: return "NotOpposite";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ExhaustedTries: return "ExhaustedTries";
    case ErrorKind::CalibrationFailure: return "CalibrationFailure";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::MembershipViolation: return "MembershipViolation";
    case ErrorKind::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace horolab
