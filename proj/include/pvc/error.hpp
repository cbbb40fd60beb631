#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvc {

enum class ErrorCode {
  InvalidDimension,
  AlphaOutOfRange,
  NegativeThreshold,
  DimensionMismatch,
  SingularConfiguration,
  NotUnit,
  ZeroVertex,
  ConditionViolated,
  EmptyAnnulus,
  BadBox,
  RadiusCapExceeded,
  BufferTooSmall,
  BadRho,
  ThresholdOutOfRange,
  EmptySample,
  DegenerateRun,
  ConfigError,
  IoError,
  NotTabular,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pvc
