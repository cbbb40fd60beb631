#include "pvc/error.hpp"

namespace pvc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NegativeThreshold: return "NegativeThreshold";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularConfiguration: return "SingularConfiguration";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::ZeroVertex: return "ZeroVertex";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::EmptyAnnulus: return "EmptyAnnulus";
    case ErrorCode::BadBox: return "BadBox";
    case ErrorCode::RadiusCapExceeded: return "RadiusCapExceeded";
    case ErrorCode::BufferTooSmall: return "BufferTooSmall";
    case ErrorCode::BadRho: return "BadRho";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateRun: return "DegenerateRun";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotTabular: return "NotTabular";
  }
  return "Unknown";
}

}  // namespace pvc
