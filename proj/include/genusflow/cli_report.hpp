#pragma once

// Run configuration, subcommand orchestration and report / plot-data output.

#include "genusflow/flux_meter.hpp"
#include "genusflow/hfn_certifier.hpp"
#include "genusflow/orbit_analysis.hpp"
#include "genusflow/surface_atlas.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace genusflow::cli {

inline constexpr int kSchemaVersion = 1;

struct IntegrateConfig {
  double step = 0.0025;
  double T = 200.0;
  int seeds = 200;
  std::uint64_t rng_seed = 1;
  double tol_close = 1e-3;
};

struct FluxConfig {
  Quadrature quadrature{64, 64};
  std::int64_t Q = 1000000;
  double delta = 1e-3;
};

struct CertifyConfig {
  int N_prime_bound = 10000;
  IndexMode mode = IndexMode::Numeric;
  /// Index data to certify instead of the constructed fixed points.
  std::optional<std::vector<FixedPointIndexData>> index_data;
};

/// The path t -> R(2 pi turns t) exp(t X), X traceless.
struct IndexPathSpec {
  std::string name;
  double turns = 0.0;
  sp2::Mat2 generator{0.0, 0.0, 0.0, 0.0};

  sp2::SymplecticMatrix2 at(double t) const;
};

/// Rotations through 1..5 turns, hyperbolic, negative hyperbolic and elliptic paths.
std::vector<IndexPathSpec> default_index_paths();

struct IndicesConfig {
  std::vector<IndexPathSpec> paths = default_index_paths();
  unsigned max_iterate = 6;
};

struct OutputConfig {
  std::string directory = "genusflow_out";
  std::vector<std::string> formats{"json", "csv"};
  int max_listed_events = 1000;
  int trajectories = 4;
  double trajectory_duration = 20.0;

  bool wants(const std::string& f) const;
};

struct RunConfig {
  int schema = kSchemaVersion;
  SurfaceConfig surface = SurfaceConfig::defaults(2);
  IntegrateConfig integrate;
  FluxConfig flux;
  CertifyConfig certify;
  IndicesConfig indices;
  OutputConfig output;

  /// Throws BadConfig.
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
};

/// Throws BadConfig when the file is missing or malformed.
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& c);

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> genus;
};

void apply(RunConfig& c, const Overrides& o);

struct StageReport {
  nlohmann::json data = nlohmann::json::object();
  std::map<std::string, bool> checks;

  bool ok() const noexcept;
};

/// Single stages. Module errors propagate as genusflow::Error.
StageReport run_build(const RunConfig& c);
StageReport run_fixed_points(const RunConfig& c);
StageReport run_periodic_search(const RunConfig& c);
StageReport run_flux(const RunConfig& c);
StageReport run_indices(const RunConfig& c);
StageReport run_certify(const RunConfig& c);

/// Every stage, aggregated into the report document.
StageReport run_report(const RunConfig& c);

const std::vector<std::string>& subcommands();

/// CSV plot data.
std::string beta_profile_csv(const GluedSurface& s, int samples = 401);
std::string level_sets_csv(const GluedSurface& s, const std::vector<double>& levels, int grid_y = 120,
                           int grid_phi = 240);
std::string fixed_point_markers_csv(const std::vector<FixedPointRecord>& records);
std::string trajectories_csv(const GluedSurface& s, const RunConfig& c);

struct RunOutcome {
  int exit_code = 0;
  nlohmann::json summary;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs a subcommand and writes its artifacts below the output directory.
/// Exit code 0 when every check passes, 1 when a check fails, 2 on a module
/// or configuration error (the summary then holds the structured error).
RunOutcome run(const std::string& subcommand, const RunConfig& c);

nlohmann::json error_json(const std::string& code, const std::string& message, const std::string& subcommand);

/// Deterministic serialization used for every report file.
std::string dump(const nlohmann::json& j);

} // namespace genusflow::cli
