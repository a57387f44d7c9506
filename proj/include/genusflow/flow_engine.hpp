#pragma once

// The glued vector field: linear on the tori, Hamiltonian on the handles,
// and its integration across chart transitions.

#include "genusflow/surface_atlas.hpp"

#include <string>
#include <vector>

namespace genusflow {

/// C-infinity step: 0 for |y| <= c, 1 for |y| >= 1 - d, strictly monotone between.
double beta(double y, double c, double d) noexcept;
double beta_derivative(double y, double c, double d) noexcept;

struct HamiltonianJet {
  double H, H_y, H_phi;
};

/// H = (1 - beta) A y z + beta sgn(y) a_end z, with A = min(a_left, a_right)
/// and a_end the speed of the torus glued at that end.
double hamiltonian_value(const HandleChart& h, double y, double phi);
HamiltonianJet hamiltonian_jet(const HandleChart& h, double y, double phi, Sector s);

/// (dy/dt, dphi/dt) = (H_phi, -H_y) / kappa.
Vec2 handle_field(const HandleChart& h, double y, double phi, Sector s);

/// Throws OutsideDomain.
Vec2 vector_field(const GluedSurface& s, const SurfacePoint& p);

struct IntegrationParams {
  double step = 0.0025;
  double tol_boundary = kTolBoundary;
  double tol_H = 1e-7;
  double event_tol = 1e-14;
  bool reverse = false; // integrate the time-reversed field

  static IntegrationParams from_json(const nlohmann::json& j);
};

/// Receives the pieces of a trajectory as they are produced. Torus segments
/// are exact straight lines; handle steps are single RK4 steps.
class SegmentSink {
public:
  virtual ~SegmentSink() = default;
  virtual void torus_segment(int /*torus*/, double /*t0*/, Vec2 /*start*/, Vec2 /*velocity*/,
                             double /*duration*/) {}
  virtual void handle_step(int /*handle*/, double /*t0*/, Vec2 /*from*/, double /*t1*/, Vec2 /*to*/) {}
  virtual void transition(double /*t*/, const SurfacePoint& /*from*/, const SurfacePoint& /*to*/) {}
};

struct FlowSummary {
  SurfacePoint end;
  double max_energy_drift = 0.0;
  int transitions = 0;
};

/// Throws CornerHit, StepTooLarge, OutsideDomain.
FlowSummary trace(const GluedSurface& s, const SurfacePoint& start, double duration,
                  const IntegrationParams& params = {}, SegmentSink* sink = nullptr);

struct TrajectorySample {
  double t;
  SurfacePoint point;
};

struct TrajectoryEvent {
  double t;
  SurfacePoint from, to;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<TrajectoryEvent> events;
  double max_energy_drift = 0.0;

  /// Rows "t,chart,c1,c2".
  std::string to_csv() const;
};

Trajectory integrate(const GluedSurface& s, const SurfacePoint& start, double duration,
                     const IntegrationParams& params = {});

SurfacePoint time_one_map(const GluedSurface& s, const SurfacePoint& p, const IntegrationParams& params = {});

/// Signed chart-coordinate difference a - b (wrapped on periodic coordinates).
Vec2 chart_delta(const SurfacePoint& a, const SurfacePoint& b);

struct MapJacobian {
  double a, b, c, d;
  ChartId source, target;
  double det() const noexcept { return a * d - b * c; }
};

/// Central-difference Jacobian of the time-t map in chart coordinates.
/// Throws OutsideDomain when the perturbed images do not share a chart.
MapJacobian flow_jacobian(const GluedSurface& s, const SurfacePoint& p, double t, double h = 1e-5,
                          const IntegrationParams& params = {});
MapJacobian time_one_jacobian(const GluedSurface& s, const SurfacePoint& p, double h = 1e-5,
                              const IntegrationParams& params = {});

/// Jacobian determinant measured against the area form (density 1 on tori,
/// kappa on handles). The difference step starts at h and is divided by 4
/// until consecutive estimates agree to 1e-7.
double area_jacobian(const GluedSurface& s, const SurfacePoint& p, double h = 1e-5,
                     const IntegrationParams& params = {});

} // namespace genusflow
