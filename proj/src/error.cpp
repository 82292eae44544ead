#include "orbitact/error.hpp"

namespace orbitact {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SingleBody: return "SingleBody";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonPositiveSeparation: return "NonPositiveSeparation";
    case ErrorCode::SelfPair: return "SelfPair";
    case ErrorCode::CollisionSample: return "CollisionSample";
    case ErrorCode::OutOfWitnessRange: return "OutOfWitnessRange";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OrbitFileInvalid: return "OrbitFileInvalid";
  }
  return "Unknown";
}

}  // namespace orbitact
