#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypercondense {

enum class ErrorCode {
  ParseError,
  EmptyHyperedge,
  LabelOutOfRange,
  InconsistentDimensions,
  NodeOutOfRange,
  MissingTrainingClass,
  CannotStratify,
  DegenerateDegree,
  ShapeMismatch,
  NonScalarLoss,
  InvalidLambda,
  OracleTooLarge,
  TooFewSyntheticNodes,
  DegeneratePrototype,
  NonFiniteLoss,
  ConfigError,
  MixedFingerprints,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  /// User/config errors exit with 2, everything else with 1.
  bool is_user_error() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace hypercondense
