#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gbec {

enum class ErrorCode {
  kDegenerateGeometry,
  kCountMismatch,
  kInvalidRange,
  kNonPositiveRadius,
  kBadGeometry,
  kMissingFeature,
  kInsufficientMotion,
  kSingularSystem,
  kGroovesRequired,
  kConfigInvalid,
  kParseError,
  kIoError,
  kInvalidTransform,
};

std::string_view to_string(ErrorCode code);

// Single exception type for every failure raised by the library. Callers
// branch on code(); the message names the offending feature or trial.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix, for re-raising with added context.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace gbec
