#include "mfs/error.hpp"

#include <sstream>

namespace mfs {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotSquare: return "NotSquare";
    case ErrorKind::kZeroRowOrColumn: return "ZeroRowOrColumn";
    case ErrorKind::kNotPrimitive: return "NotPrimitive";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kOrbitNotAdmissible: return "OrbitNotAdmissible";
    case ErrorKind::kOrbitsIntersect: return "OrbitsIntersect";
    case ErrorKind::kSftMismatch: return "SftMismatch";
    case ErrorKind::kNotConvex: return "NotConvex";
    case ErrorKind::kNotConcave: return "NotConcave";
    case ErrorKind::kSlopesNotStabilized: return "SlopesNotStabilized";
    case ErrorKind::kMaxMismatch: return "MaxMismatch";
    case ErrorKind::kNonUniqueMaximizer: return "NonUniqueMaximizer";
    case ErrorKind::kNegativeValues: return "NegativeValues";
    case ErrorKind::kEmptyGraph: return "EmptyGraph";
    case ErrorKind::kHypothesisViolation: return "HypothesisViolation";
    case ErrorKind::kMaxEntropyMismatch: return "MaxEntropyMismatch";
    case ErrorKind::kPeriodTooLarge: return "PeriodTooLarge";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

std::string describe_violation(const std::string& hypothesis, double measured, double tolerance) {
  std::ostringstream out;
  out.precision(6);
  out << hypothesis << " (measured " << measured << ", tolerance " << tolerance << ")";
  return out.str();
}

}  // namespace

HypothesisViolation::HypothesisViolation(std::string hypothesis, double measured, double tolerance)
    : Error(ErrorKind::kHypothesisViolation, describe_violation(hypothesis, measured, tolerance)),
      hypothesis_(std::move(hypothesis)),
      measured_(measured),
      tolerance_(tolerance) {}

}  // namespace mfs
