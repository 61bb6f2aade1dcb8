#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfs {

enum class ErrorKind {
  kNotSquare,
  kZeroRowOrColumn,
  kNotPrimitive,
  kInvalidArgument,
  kOrbitNotAdmissible,
  kOrbitsIntersect,
  kSftMismatch,
  kNotConvex,
  kNotConcave,
  kSlopesNotStabilized,
  kMaxMismatch,
  kNonUniqueMaximizer,
  kNegativeValues,
  kEmptyGraph,
  kHypothesisViolation,
  kMaxEntropyMismatch,
  kPeriodTooLarge,
  kTooLarge,
  kNonConvergence,
  kConfigInvalid,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A violated hypothesis of an inverse problem, with the measured violation.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::string hypothesis, double measured, double tolerance);

  const std::string& hypothesis() const noexcept { return hypothesis_; }
  double measured() const noexcept { return measured_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  std::string hypothesis_;
  double measured_;
  double tolerance_;
};

}  // namespace mfs
