#include "hypercondense/errors.hpp"

namespace hypercondense {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyHyperedge: return "EmptyHyperedge";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::InconsistentDimensions: return "InconsistentDimensions";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::MissingTrainingClass: return "MissingTrainingClass";
    case ErrorCode::CannotStratify: return "CannotStratify";
    case ErrorCode::DegenerateDegree: return "DegenerateDegree";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonScalarLoss: return "NonScalarLoss";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::TooFewSyntheticNodes: return "TooFewSyntheticNodes";
    case ErrorCode::DegeneratePrototype: return "DegeneratePrototype";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MixedFingerprints: return "MixedFingerprints";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool Error::is_user_error() const noexcept {
  switch (code_) {
    case ErrorCode::ParseError:
    case ErrorCode::EmptyHyperedge:
    case ErrorCode::LabelOutOfRange:
    case ErrorCode::InconsistentDimensions:
    case ErrorCode::NodeOutOfRange:
    case ErrorCode::MissingTrainingClass:
    case ErrorCode::CannotStratify:
    case ErrorCode::InvalidLambda:
    case ErrorCode::OracleTooLarge:
    case ErrorCode::TooFewSyntheticNodes:
    case ErrorCode::ConfigError:
    case ErrorCode::MixedFingerprints:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

}  // namespace hypercondense
