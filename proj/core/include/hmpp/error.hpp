#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmpp {

enum class ErrorCode {
  kInvalidArgument,
  kNonIncreasingTimes,
  kNonFiniteIntensity,
  kOutOfSupport,
  kNoValidBound,
  kZeroMajorant,
  kTimeResolutionExhausted,
  kMajorantViolation,
  kInvalidModel,
  kDominationBreach,
  kDivergentIntegral,
  kSingularSystem,
  kUnstableModel,
  kConfigError,
  kHashMismatch,
  kTraceFormat,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can branch on the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmpp
