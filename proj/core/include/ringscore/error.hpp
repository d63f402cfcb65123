#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ringscore {

enum class ErrorCode {
  BadMagic,
  BadHeader,
  Truncated,
  DimensionMismatch,
  BadParameter,
  TooSmall,
  TooFewPoints,
  Degenerate,
  NoTargetFound,
  TooFewRings,
  NoArrowDetected,
  AmbiguousDetection,
  EmptyBlob,
  UnknownPlayer,
  AtInfinity,
  OutOfFrame,
  Io,
  Config,
};

/// Stable identifier used in logs and JSON output, e.g. "NoArrowDetected".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ringscore
