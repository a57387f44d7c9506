#include "genusflow/cli_report.hpp"
#include "genusflow/error.hpp"
#include "genusflow/flow_engine.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

using namespace genusflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected genusflow::Error");
  return static_cast<ErrorCode>(-1);
}

fs::path source_dir() { return GENUSFLOW_SOURCE_DIR; }

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("genusflow_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

struct Exec {
  int status = -1;
  std::string out;
};

Exec exec(const std::string& cmd) {
  Exec e;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) e.out.append(buf, n);
  const int raw = pclose(pipe);
  e.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return e;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

cli::RunConfig small_config(const fs::path& out) {
  auto c = cli::RunConfig::from_json(json{{"schema", 1}, {"integrate", {{"seeds", 12}, {"T", 40}}}});
  c.output.directory = out.string();
  return c;
}

} // namespace

TEST_CASE("config defaults and round trip") {
  const auto c = cli::RunConfig::from_json(json{{"schema", 1}});
  CHECK(c.surface.genus == 2);
  REQUIRE(c.surface.slopes.size() == 2);
  CHECK(c.surface.slopes[1].y == doctest::Approx(std::numbers::sqrt2));
  CHECK(c.integrate.seeds == 200);
  CHECK(c.integrate.T == 200.0);
  CHECK(c.integrate.tol_close == 1e-3);
  CHECK(c.flux.Q == 1000000);
  CHECK(c.certify.N_prime_bound == 10000);
  CHECK(c.indices.paths.size() == cli::default_index_paths().size());

  const auto file = cli::load_config(source_dir() / "configs" / "default.json");
  CHECK(cli::to_json(file) == cli::to_json(c));

  const auto echo = cli::to_json(file);
  auto again = json::parse(echo.dump());
  again["output"]["directory"] = "x";
  CHECK(cli::to_json(cli::RunConfig::from_json(again)) == echo);
}

TEST_CASE("config rejects malformed input") {
  auto bad = [](json j) { return code_of([&] { cli::RunConfig::from_json(j); }); };
  CHECK(bad(json::object()) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 2}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"extra", 1}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"integrate", {{"seeds", 0}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"integrate", {{"tol_close", -1.0}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"integrate", {{"step", 0}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"flux", {{"delta", 0.0}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"flux", {{"Q", 0}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"certify", {{"mode", "fuzzy"}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"certify", {{"index_data", {{{"cz", 0}}}}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"output", {{"formats", {"png"}}}}}) == ErrorCode::BadConfig);
  CHECK(bad(json{{"schema", 1}, {"indices", {{"paths", {{{"generator", {1, 0, 0, 1}}}}}}}}) ==
        ErrorCode::BadConfig);
  CHECK(code_of([] { cli::load_config("/nonexistent/genusflow.json"); }) == ErrorCode::BadConfig);

  const auto p = scratch("garbled");
  fs::create_directories(p);
  std::ofstream(p / "c.json") << "{ not json";
  CHECK(code_of([&] { cli::load_config(p / "c.json"); }) == ErrorCode::BadConfig);
}

TEST_CASE("overrides") {
  auto c = cli::RunConfig::from_json(json{{"schema", 1}});
  cli::apply(c, {std::string("elsewhere"), 99, 3});
  CHECK(c.output.directory == "elsewhere");
  CHECK(c.integrate.rng_seed == 99);
  CHECK(c.surface.genus == 3);
  CHECK(c.surface.slopes.size() == 3);
  CHECK(code_of([&] { cli::apply(c, {std::nullopt, std::nullopt, 1}); }) == ErrorCode::BadConfig);
}

TEST_CASE("all on the default configuration") {
  const auto out = scratch("all");
  auto c = cli::load_config(source_dir() / "configs" / "default.json");
  c.output.directory = out.string();
  const auto r = cli::run("all", c);
  CHECK(r.exit_code == 0);
  CHECK(r.summary["ok"] == true);

  const auto rep = read_json(out / "report.json");
  CHECK(rep["ok"] == true);
  CHECK(rep["fixed_points"]["fixed_points"].size() == 2);
  CHECK(rep["periodic_search"]["closure_events"].empty());
  CHECK(rep["periodic_search"]["unflagged"] == 0);
  const auto flux = rep["flux"]["flux"]["flux"];
  REQUIRE(flux.size() == 4);
  CHECK(std::abs(flux[0].get<double>() - 1.0) < 1e-6);
  CHECK(std::abs(flux[1].get<double>() - std::numbers::phi) < 1e-6);
  CHECK(std::abs(flux[2].get<double>() - 1.0) < 1e-6);
  CHECK(std::abs(flux[3].get<double>() - std::numbers::sqrt2) < 1e-6);
  CHECK(rep["certify"]["certificate"]["status"] == "NoHypothesisSatisfied");

  for (const char* f : {"build.json", "fixed_points.json", "periodic_search.json", "flux.json", "indices.json",
                        "certify.json", "trajectories.csv", "beta_profile.csv", "level_sets.csv",
                        "fixed_points.csv", "report.meta.json"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
  const auto ps = read_json(out / "periodic_search.json");
  CHECK(ps.contains("fixed_points"));
  CHECK(ps.contains("closure_events"));
  CHECK(ps.contains("checks"));
  const auto meta = read_json(out / "report.meta.json");
  CHECK(meta.contains("generated_at"));
  CHECK_FALSE(rep.dump().find("generated_at") != std::string::npos);
}

TEST_CASE("reports are byte-identical for identical configurations") {
  const auto a = scratch("ident_a"), b = scratch("ident_b");
  auto ca = small_config(a), cb = small_config(b);
  REQUIRE(cli::run("report", ca).exit_code == 0);
  REQUIRE(cli::run("report", cb).exit_code == 0);
  for (const char* f : {"report.json", "trajectories.csv", "beta_profile.csv", "level_sets.csv", "fixed_points.csv"}) {
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
  }
  CHECK(!slurp(a / "report.json").empty());
}

TEST_CASE("periodic-search on the rational control flags closures") {
  const auto out = scratch("control");
  auto c = cli::load_config(source_dir() / "configs" / "control_rational.json");
  c.output.directory = out.string();
  const auto r = cli::run("periodic-search", c);
  CHECK(r.exit_code == 0);
  const auto ps = read_json(out / "periodic_search.json");
  CHECK(ps["control_run"] == true);
  CHECK(ps["unflagged"].get<long>() >= 1);
  CHECK(ps["closure_events_total"].get<long>() >= ps["closure_events"].size());
  CHECK(ps["closure_events"].size() <= static_cast<std::size_t>(c.output.max_listed_events));
  CHECK_FALSE(ps["checks"].contains("no_unflagged_closures"));

  // the same slopes fail the flux condition, so the full run is not clean
  const auto f = cli::run("flux", c);
  CHECK(f.exit_code == 1);
  CHECK(f.summary["checks"]["flux.flux_condition"] == false);
}

TEST_CASE("certify on augmented index data") {
  const auto out = scratch("augmented");
  auto c = cli::load_config(source_dir() / "configs" / "augmented.json");
  c.output.directory = out.string();
  const auto r = cli::run("certify", c);
  CHECK(r.exit_code == 0);
  const auto cert = read_json(out / "certify.json")["certificate"];
  CHECK(cert["status"] == "Certified");
  CHECK(cert["tau0"] == 7);
  CHECK(cert["applicable_theorems"].size() == 3);
  CHECK(cert["certified_count"] == 1225);
  CHECK(cert["expected_prime_count"] == 1225);
}

TEST_CASE("module errors become structured error reports") {
  const auto out = scratch("errors");
  auto c = small_config(out);
  c.surface.epsilon = 10.0;
  const auto r = cli::run("build", c);
  CHECK(r.exit_code == 2);
  CHECK(r.summary["ok"] == false);
  CHECK(r.summary["error"]["code"] == "EpsilonTooLarge");
  CHECK(read_json(out / "error.json") == r.summary);

  const auto u = cli::run("nonsense", small_config(scratch("unknown")));
  CHECK(u.exit_code == 2);
  CHECK(u.summary["error"]["code"] == "BadConfig");

  c = small_config(scratch("inconsistent"));
  const FixedPointIndexData h{"h", 0.0, 0, sp2::SpectralClass::HyperbolicPositive};
  c.certify.index_data = std::vector<FixedPointIndexData>{h, h, h};
  CHECK(cli::run("certify", c).summary["error"]["code"] == "InconsistentInput");
}

TEST_CASE("single stages report their checks") {
  const auto c = small_config(scratch("stages"));
  const auto b = cli::run_build(c);
  CHECK(b.ok());
  CHECK(b.data["topology"]["euler_characteristic"] == -2);
  const auto fp = cli::run_fixed_points(c);
  CHECK(fp.ok());
  CHECK(fp.checks.size() == 5);
  const auto ix = cli::run_indices(c);
  CHECK(ix.ok());
  CHECK(ix.data["paths"].size() == cli::default_index_paths().size());
  CHECK(ix.data["paths"][2]["mean_index"].get<double>() == doctest::Approx(6.0).epsilon(1e-12));

  auto g3 = c;
  g3.surface.set_genus(3);
  const auto f3 = cli::run_flux(g3);
  CHECK(f3.ok());
  CHECK(f3.data["flux"]["flux"].size() == 6);
  CHECK(cli::run_fixed_points(g3).data["fixed_points"].size() == 4);
}

TEST_CASE("plot data") {
  const auto s = build_surface(SurfaceConfig::defaults(2));

  const auto beta_rows = csv_rows(cli::beta_profile_csv(s, 101));
  REQUIRE(beta_rows.size() == 102);
  CHECK(beta_rows[0] == std::vector<std::string>{"y", "beta", "beta_derivative"});
  for (std::size_t i = 1; i < beta_rows.size(); ++i) {
    const double y = std::stod(beta_rows[i][0]), b = std::stod(beta_rows[i][1]);
    if (std::abs(y) <= s.config.c) CHECK(b == 0.0);
    if (std::abs(y) >= 1.0 - s.config.d) CHECK(b == doctest::Approx(1.0));
  }

  const double level = 0.3 * std::abs(hamiltonian_value(s.handles[0], 1.0, std::numbers::pi / 2));
  const auto ls = csv_rows(cli::level_sets_csv(s, {level}, 80, 160));
  REQUIRE(ls.size() > 20);
  CHECK(ls[0] == std::vector<std::string>{"level", "segment", "chart", "c1", "c2"});
  double worst = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    CHECK(ls[i][2] == "handle:0");
    worst = std::max(worst, std::abs(hamiltonian_value(s.handles[0], std::stod(ls[i][3]), std::stod(ls[i][4])) - level));
  }
  CHECK(worst < 0.02 * level);

  cli::RunConfig c = small_config(scratch("plot"));
  c.output.trajectories = 2;
  c.output.trajectory_duration = 3.0;
  const auto tr = csv_rows(cli::trajectories_csv(s, c));
  CHECK(tr[0] == std::vector<std::string>{"trajectory", "t", "chart", "c1", "c2"});
  CHECK(tr.back()[0] == "1");
  CHECK(std::stod(tr.back()[1]) == doctest::Approx(3.0));
}

TEST_CASE("command line") {
  const std::string bin = GENUSFLOW_CLI;
  const auto out = scratch("cmd");

  const auto missing = exec(bin + " all --config /nonexistent/c.json --out " + out.string());
  CHECK(missing.status != 0);
  const auto err = json::parse(missing.out);
  CHECK(err["ok"] == false);
  CHECK(err["error"]["code"] == "BadConfig");

  const auto ok = exec(bin + " fixed-points --config " + (source_dir() / "configs" / "default.json").string() +
                       " --out " + out.string() + " --genus 3 --seed 5");
  CHECK(ok.status == 0);
  const auto fp = read_json(out / "fixed_points.json");
  CHECK(fp["fixed_points"].size() == 4);
  CHECK(fp["config"]["integrate"]["rng_seed"] == 5);

  CHECK(exec(bin + " --help").status == 0);
  CHECK(exec(bin + " frobnicate").status != 0);
}
