#include "masader/error.hpp"

namespace masader {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SourceUnreadable: return "SourceUnreadable";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::UnterminatedString: return "UnterminatedString";
    case ErrorCode::UnterminatedBacktick: return "UnterminatedBacktick";
    case ErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ProviderFailure: return "ProviderFailure";
    case ErrorCode::FetchFailure: return "FetchFailure";
    case ErrorCode::BuildFailure: return "BuildFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace masader
