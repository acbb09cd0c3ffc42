#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace masader {

enum class ErrorCode {
  SourceUnreadable,
  OutOfRange,
  UnknownFeature,
  UnterminatedString,
  UnterminatedBacktick,
  IllegalCharacter,
  SyntaxError,
  TypeMismatch,
  InvalidK,
  DimensionMismatch,
  ProviderFailure,
  FetchFailure,
  BuildFailure,
  ConfigError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library. Query errors carry the byte offset
// into the query text they refer to.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), code_(code), offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace masader
