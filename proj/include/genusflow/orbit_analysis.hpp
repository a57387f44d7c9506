#pragma once

// Fixed points of the time-one map, closure search for periodic orbits and
// the structural checks of the handle dynamics.

#include "genusflow/flow_engine.hpp"
#include "genusflow/sp2_index.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace genusflow {

inline constexpr double kTolFixedPoint = 1e-8;

struct FixedPointRecord {
  SurfacePoint location;
  sp2::SymplecticMatrix2 linearized; // raw finite-difference matrix
  sp2::SpectralClass spectral_class = sp2::SpectralClass::Degenerate;
  std::array<std::complex<double>, 2> eigenvalues;
  double mean_index = 0.0;
  int cz = 0;
  double residual = 0.0; // chart distance between x and its time-one image
};

struct FixedPointOptions {
  double tol_fp = kTolFixedPoint;
  double fd_step = 1e-5;
  int grid_y = 80;    // scan resolution per handle
  int grid_phi = 144;
  int torus_grid = 32;
  std::size_t path_samples = 32;
  bool require_expected_count = true;
  IntegrationParams integration;
};

/// Throws NewtonDiverged, UnexpectedFixedPointCount (unless disabled).
std::vector<FixedPointRecord> find_fixed_points(const GluedSurface& s, const FixedPointOptions& opts = {});

/// Zero of the field near `guess` in a handle chart. Throws NewtonDiverged.
SurfacePoint newton_zero(const GluedSurface& s, const SurfacePoint& guess, double tol = 1e-13);

struct ClosureEvent {
  int seed_index = 0;
  SurfacePoint seed;
  double t_return = 0.0;
  double distance = 0.0;
  bool near_fixed_point = false;
  bool near_circle = false;

  bool flagged() const noexcept { return near_fixed_point || near_circle; }
};

/// Which side of every handle a trajectory has visited. V- of handle i is
/// torus i together with y < 0; V+ is torus i+1 together with y > 0.
struct VisitRecord {
  int trajectory = 0;
  std::vector<char> minus, plus;
};

struct SkippedSeed {
  int seed_index = 0;
  std::string error;
};

struct PeriodicSearchParams {
  double T = 200.0;
  int seeds = 200;
  std::uint64_t rng_seed = 1;
  double tol_close = 1e-3;
  double t_min = 0.1;
  double shadow_factor = 10.0;
  int threads = 0; // 0: hardware concurrency, capped by GENUSFLOW_THREADS
  IntegrationParams integration;
  std::vector<SurfacePoint> fixed_points; // located automatically when empty
  std::vector<SurfacePoint> start_points; // replaces the generated seeds when given
};

struct PeriodicSearchResult {
  PeriodicSearchParams params;
  std::vector<SurfacePoint> seeds;
  std::vector<ClosureEvent> events; // sorted by (seed, t_return)
  std::vector<VisitRecord> visits;
  std::vector<SkippedSeed> skipped;

  std::size_t unflagged() const noexcept;
};

/// Low-discrepancy start points spread over the charts in proportion to area.
std::vector<SurfacePoint> seed_points(const GluedSurface& s, int n, std::uint64_t rng_seed);

/// Worker count: `requested` (or the hardware count when 0), capped by
/// GENUSFLOW_THREADS.
int thread_budget(int requested = 0);

PeriodicSearchResult search_periodic_orbits(const GluedSurface& s, const PeriodicSearchParams& params = {});

struct InvariantCircleReport {
  int handle = 0;
  int samples = 0;
  double max_abs_ydot = 0.0;
  std::vector<double> rest_points;
  std::vector<int> arc_signs; // sign of dphi/dt between consecutive rest points
};

using HandleFieldFn = std::function<Vec2(double y, double phi)>;

/// Throws InvariantCircleViolation.
InvariantCircleReport verify_invariant_circle(const GluedSurface& s, int handle);
InvariantCircleReport verify_invariant_circle(int handle, const HandleFieldFn& field, int samples = 360);

struct PartitionReport {
  std::size_t trajectories = 0;
  std::size_t handle_visits = 0;
};

VisitRecord visits_of(const GluedSurface& s, const Trajectory& t, int id);

/// Throws PartitionViolation naming the first offending trajectory.
PartitionReport separatrix_partition_check(const GluedSurface& s, const std::vector<Trajectory>& trajectories);
PartitionReport separatrix_partition_check(const GluedSurface& s, const std::vector<VisitRecord>& visits);

nlohmann::json to_json(const FixedPointRecord& r);
nlohmann::json to_json(const ClosureEvent& e);
nlohmann::json to_json(const PeriodicSearchResult& r);
nlohmann::json to_json(const InvariantCircleReport& r);
nlohmann::json to_json(const PartitionReport& r);

} // namespace genusflow
