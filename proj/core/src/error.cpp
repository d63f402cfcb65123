#include "ringscore/error.hpp"

namespace ringscore {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NoTargetFound: return "NoTargetFound";
    case ErrorCode::TooFewRings: return "TooFewRings";
    case ErrorCode::NoArrowDetected: return "NoArrowDetected";
    case ErrorCode::AmbiguousDetection: return "AmbiguousDetection";
    case ErrorCode::EmptyBlob: return "EmptyBlob";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::AtInfinity: return "AtInfinity";
    case ErrorCode::OutOfFrame: return "OutOfFrame";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace ringscore
