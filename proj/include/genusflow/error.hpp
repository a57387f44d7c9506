#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genusflow {

enum class ErrorCode {
  // sp2_index
  NotSymplectic,
  InvalidPath,
  DegenerateMatrix,
  InsufficientResolution,
  DegenerateEndpoint,
  NormalizationEscapedComponent,
  InconsistentInput,
  // surface_atlas
  EpsilonTooLarge,
  BadSlope,
  BadConfig,
  NotOnBoundary,
  TopologyMismatch,
  // flow_engine
  OutsideDomain,
  CornerHit,
  StepTooLarge,
  // orbit_analysis
  NewtonDiverged,
  UnexpectedFixedPointCount,
  InvariantCircleViolation,
  PartitionViolation,
  // flux_meter
  NoValidOffset,
  SweepHitsCutout,
  FluxMismatch,
  // hfn_certifier
  InvalidIndexData,
  SContainsEqualIndex,
  MarginFailure,
  PreconditionViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

// All module failures surface as this exception; `code()` is the structured
// kind reported by the CLI.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace genusflow
