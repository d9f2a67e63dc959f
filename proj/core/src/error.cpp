#include "hmpp/error.hpp"

namespace hmpp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonIncreasingTimes: return "NonIncreasingTimes";
    case ErrorCode::kNonFiniteIntensity: return "NonFiniteIntensity";
    case ErrorCode::kOutOfSupport: return "OutOfSupport";
    case ErrorCode::kNoValidBound: return "NoValidBound";
    case ErrorCode::kZeroMajorant: return "ZeroMajorant";
    case ErrorCode::kTimeResolutionExhausted: return "TimeResolutionExhausted";
    case ErrorCode::kMajorantViolation: return "MajorantViolation";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kDominationBreach: return "DominationBreach";
    case ErrorCode::kDivergentIntegral: return "DivergentIntegral";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kUnstableModel: return "UnstableModel";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kTraceFormat: return "TraceFormat";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hmpp
