#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace horolab {

enum class ErrorKind {
  InvalidArgument,
  SingularInput,
  NotRegular,
  InvalidDirection,
  MissingRepresentative,
  NumericalFailure,
  NotInFlat,
  NotOpposite,
  NonConvergence,
  ExhaustedTries,
  CalibrationFailure,
  NoCrossing,
  MembershipViolation,
  ResolutionExceeded,
  SchemaViolation,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace horolab
