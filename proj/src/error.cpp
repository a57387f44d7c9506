#include "genusflow/error.hpp"

namespace genusflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::NotSymplectic: return "NotSymplectic";
  case ErrorCode::InvalidPath: return "InvalidPath";
  case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
  case ErrorCode::InsufficientResolution: return "InsufficientResolution";
  case ErrorCode::DegenerateEndpoint: return "DegenerateEndpoint";
  case ErrorCode::NormalizationEscapedComponent: return "NormalizationEscapedComponent";
  case ErrorCode::InconsistentInput: return "InconsistentInput";
  case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
  case ErrorCode::BadSlope: return "BadSlope";
  case ErrorCode::BadConfig: return "BadConfig";
  case ErrorCode::NotOnBoundary: return "NotOnBoundary";
  case ErrorCode::TopologyMismatch: return "TopologyMismatch";
  case ErrorCode::OutsideDomain: return "OutsideDomain";
  case ErrorCode::CornerHit: return "CornerHit";
  case ErrorCode::StepTooLarge: return "StepTooLarge";
  case ErrorCode::NewtonDiverged: return "NewtonDiverged";
  case ErrorCode::UnexpectedFixedPointCount: return "UnexpectedFixedPointCount";
  case ErrorCode::InvariantCircleViolation: return "InvariantCircleViolation";
  case ErrorCode::PartitionViolation: return "PartitionViolation";
  case ErrorCode::NoValidOffset: return "NoValidOffset";
  case ErrorCode::SweepHitsCutout: return "SweepHitsCutout";
  case ErrorCode::FluxMismatch: return "FluxMismatch";
  case ErrorCode::InvalidIndexData: return "InvalidIndexData";
  case ErrorCode::SContainsEqualIndex: return "SContainsEqualIndex";
  case ErrorCode::MarginFailure: return "MarginFailure";
  case ErrorCode::PreconditionViolation: return "PreconditionViolation";
  }
  return "Unknown";
}

} // namespace genusflow
