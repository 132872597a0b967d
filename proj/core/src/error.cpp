#include "gbec/error.hpp"

namespace gbec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kNonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::kBadGeometry: return "BadGeometry";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kInsufficientMotion: return "InsufficientMotion";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kGroovesRequired: return "GroovesRequired";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidTransform: return "InvalidTransform";
  }
  return "Unknown";
}

}  // namespace gbec
