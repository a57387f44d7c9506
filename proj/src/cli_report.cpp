#include "genusflow/cli_report.hpp"

#include "genusflow/error.hpp"
#include "genusflow/flow_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace genusflow::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::BadConfig, msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      bad("unknown key '" + k + "' in " + where);
    }
  }
}

double positive(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number() || !(j[key].get<double>() > 0.0)) bad(where + "." + key + " must be a positive number");
  return j[key].get<double>();
}

template <class Int>
Int integer(const json& j, const char* key, Int fallback, Int min, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  if (!v.is_number_integer()) bad(where + "." + key + " must be an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u < static_cast<std::uint64_t>(std::max<Int>(min, 0))) bad(where + "." + key + " is too small");
    return static_cast<Int>(u);
  }
  const auto s = v.get<std::int64_t>();
  if (s < static_cast<std::int64_t>(min)) bad(where + "." + key + " must be at least " + std::to_string(min));
  return static_cast<Int>(s);
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json surface_echo(const SurfaceConfig& s) {
  json slopes = json::array();
  for (const auto& v : s.slopes) slopes.push_back(vec_json(v));
  json j{{"genus", s.genus}, {"slopes", slopes}, {"epsilon", s.epsilon}, {"c", s.c}, {"d", s.d}};
  if (s.cutout_centers) j["cutout_centers"] = {vec_json(s.cutout_centers->first), vec_json(s.cutout_centers->second)};
  return j;
}

IntegrationParams integration_of(const RunConfig& c) {
  IntegrationParams p;
  p.step = c.integrate.step;
  return p;
}

std::vector<FixedPointRecord> census(const GluedSurface& s, const RunConfig& c) {
  FixedPointOptions o;
  o.integration = integration_of(c);
  o.require_expected_count = false;
  return find_fixed_points(s, o);
}

json records_json(const std::vector<FixedPointRecord>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

bool all_of_records(const std::vector<FixedPointRecord>& rs, auto pred) { return std::all_of(rs.begin(), rs.end(), pred); }

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::BadConfig, "cannot write " + p.string());
  f << content;
}

json checks_json(const std::map<std::string, bool>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

json document(const StageReport& r) {
  json j = r.data;
  j["checks"] = checks_json(r.checks);
  j["ok"] = r.ok();
  return j;
}

} // namespace

sp2::SymplecticMatrix2 IndexPathSpec::at(double t) const {
  const sp2::Mat2 x{t * generator.a, t * generator.b, t * generator.c, t * generator.d};
  return sp2::SymplecticMatrix2::rotation(2.0 * M_PI * turns * t) * sp2::SymplecticMatrix2::exp_traceless(x);
}

bool OutputConfig::wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

std::vector<IndexPathSpec> default_index_paths() {
  std::vector<IndexPathSpec> out;
  for (int m = 1; m <= 5; ++m) out.push_back({"rotation_" + std::to_string(m), static_cast<double>(m), {0, 0, 0, 0}});
  out.push_back({"hyperbolic", 0.0, {1.0, 0.0, 0.0, -1.0}});
  out.push_back({"negative_hyperbolic", 0.5, {1.0, 0.0, 0.0, -1.0}});
  out.push_back({"elliptic", 0.3, {0, 0, 0, 0}});
  out.push_back({"elliptic_sheared", 1.15, {0.2, 0.3, 0.1, -0.2}});
  return out;
}

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j, "config", {"schema", "surface", "integrate", "flux", "certify", "indices", "output"});
  if (!j.contains("schema")) bad("config needs a schema field");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion) {
    bad("unsupported schema " + j["schema"].dump() + ", expected " + std::to_string(kSchemaVersion));
  }
  RunConfig c;
  if (j.contains("surface")) {
    check_keys(j["surface"], "surface", {"genus", "slopes", "epsilon", "c", "d", "cutout_centers"});
    c.surface = SurfaceConfig::from_json(j["surface"]);
  }
  if (j.contains("integrate")) {
    const auto& i = j["integrate"];
    check_keys(i, "integrate", {"step", "T", "seeds", "rng_seed", "tol_close"});
    c.integrate.step = positive(i, "step", c.integrate.step, "integrate");
    c.integrate.T = positive(i, "T", c.integrate.T, "integrate");
    c.integrate.seeds = integer<int>(i, "seeds", c.integrate.seeds, 1, "integrate");
    c.integrate.rng_seed = integer<std::uint64_t>(i, "rng_seed", c.integrate.rng_seed, 0, "integrate");
    c.integrate.tol_close = positive(i, "tol_close", c.integrate.tol_close, "integrate");
  }
  if (j.contains("flux")) {
    const auto& f = j["flux"];
    check_keys(f, "flux", {"quadrature", "Q", "delta"});
    if (f.contains("quadrature")) {
      const auto& q = f["quadrature"];
      if (q.is_number_integer()) {
        c.flux.quadrature.n_s = c.flux.quadrature.n_t = integer<int>(f, "quadrature", 64, 1, "flux");
      } else {
        check_keys(q, "flux.quadrature", {"n_s", "n_t"});
        c.flux.quadrature.n_s = integer<int>(q, "n_s", 64, 1, "flux.quadrature");
        c.flux.quadrature.n_t = integer<int>(q, "n_t", 64, 1, "flux.quadrature");
      }
    }
    c.flux.Q = integer<std::int64_t>(f, "Q", c.flux.Q, 1, "flux");
    c.flux.delta = positive(f, "delta", c.flux.delta, "flux");
  }
  if (j.contains("certify")) {
    const auto& k = j["certify"];
    check_keys(k, "certify", {"N_prime_bound", "mode", "index_data"});
    c.certify.N_prime_bound = integer<int>(k, "N_prime_bound", c.certify.N_prime_bound, 2, "certify");
    if (k.contains("mode")) {
      const auto m = k["mode"].is_string() ? k["mode"].get<std::string>() : "";
      if (m == "numeric") c.certify.mode = IndexMode::Numeric;
      else if (m == "exact") c.certify.mode = IndexMode::Exact;
      else bad("certify.mode must be \"numeric\" or \"exact\"");
    }
    if (k.contains("index_data")) {
      if (!k["index_data"].is_array()) bad("certify.index_data must be an array");
      std::vector<FixedPointIndexData> pts;
      for (const auto& p : k["index_data"]) pts.push_back(index_data_from_json(p));
      c.certify.index_data = std::move(pts);
    }
  }
  if (j.contains("indices")) {
    const auto& x = j["indices"];
    check_keys(x, "indices", {"paths", "max_iterate"});
    c.indices.max_iterate = integer<unsigned>(x, "max_iterate", c.indices.max_iterate, 1, "indices");
    if (x.contains("paths")) {
      if (!x["paths"].is_array()) bad("indices.paths must be an array");
      c.indices.paths.clear();
      for (const auto& p : x["paths"]) {
        check_keys(p, "indices.paths[]", {"name", "turns", "generator"});
        IndexPathSpec spec;
        spec.name = p.value("name", "path_" + std::to_string(c.indices.paths.size()));
        if (p.contains("turns")) {
          if (!p["turns"].is_number()) bad("indices.paths[].turns must be a number");
          spec.turns = p["turns"].get<double>();
        }
        if (p.contains("generator")) {
          const auto& g = p["generator"];
          if (!g.is_array() || g.size() != 4 || !std::all_of(g.begin(), g.end(), [](const json& e) { return e.is_number(); })) {
            bad("indices.paths[].generator must hold four numbers");
          }
          spec.generator = {g[0].get<double>(), g[1].get<double>(), g[2].get<double>(), g[3].get<double>()};
        }
        c.indices.paths.push_back(spec);
      }
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"directory", "formats", "max_listed_events", "trajectories", "trajectory_duration"});
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) bad("output.directory must be a string");
      c.output.directory = o["directory"].get<std::string>();
    }
    if (o.contains("formats")) {
      if (!o["formats"].is_array()) bad("output.formats must be an array");
      c.output.formats.clear();
      for (const auto& f : o["formats"]) {
        if (!f.is_string()) bad("output.formats entries must be strings");
        c.output.formats.push_back(f.get<std::string>());
      }
    }
    c.output.max_listed_events = integer<int>(o, "max_listed_events", c.output.max_listed_events, 0, "output");
    c.output.trajectories = integer<int>(o, "trajectories", c.output.trajectories, 0, "output");
    c.output.trajectory_duration = positive(o, "trajectory_duration", c.output.trajectory_duration, "output");
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (!(integrate.step > 0.0 && integrate.T > 0.0 && integrate.tol_close > 0.0)) bad("integration tolerances must be positive");
  if (integrate.seeds < 1) bad("integrate.seeds must be at least 1");
  if (flux.quadrature.n_s < 1 || flux.quadrature.n_t < 1) bad("flux.quadrature must be positive");
  if (flux.Q < 1 || !(flux.delta > 0.0)) bad("flux.Q must be at least 1 and flux.delta positive");
  if (certify.N_prime_bound < 2) bad("certify.N_prime_bound must be at least 2");
  if (indices.max_iterate < 1) bad("indices.max_iterate must be at least 1");
  for (const auto& p : indices.paths) {
    if (std::abs(p.generator.trace()) > 1e-12) bad("generator of path '" + p.name + "' is not traceless");
  }
  for (const auto& f : output.formats) {
    if (f != "json" && f != "csv") bad("unknown output format '" + f + "'");
  }
  if (output.directory.empty()) bad("output.directory must not be empty");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) bad("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    bad("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return RunConfig::from_json(j);
}

json to_json(const RunConfig& c) {
  json paths = json::array();
  for (const auto& p : c.indices.paths) {
    paths.push_back({{"name", p.name},
                     {"turns", p.turns},
                     {"generator", {p.generator.a, p.generator.b, p.generator.c, p.generator.d}}});
  }
  json certify{{"N_prime_bound", c.certify.N_prime_bound},
               {"mode", c.certify.mode == IndexMode::Exact ? "exact" : "numeric"}};
  if (c.certify.index_data) {
    json pts = json::array();
    for (const auto& p : *c.certify.index_data) pts.push_back(genusflow::to_json(p));
    certify["index_data"] = pts;
  }
  return {{"schema", c.schema},
          {"surface", surface_echo(c.surface)},
          {"integrate",
           {{"step", c.integrate.step},
            {"T", c.integrate.T},
            {"seeds", c.integrate.seeds},
            {"rng_seed", c.integrate.rng_seed},
            {"tol_close", c.integrate.tol_close}}},
          {"flux",
           {{"quadrature", {{"n_s", c.flux.quadrature.n_s}, {"n_t", c.flux.quadrature.n_t}}},
            {"Q", c.flux.Q},
            {"delta", c.flux.delta}}},
          {"certify", certify},
          {"indices", {{"paths", paths}, {"max_iterate", c.indices.max_iterate}}},
          {"output",
           {{"formats", c.output.formats},
            {"max_listed_events", c.output.max_listed_events},
            {"trajectories", c.output.trajectories},
            {"trajectory_duration", c.output.trajectory_duration}}}};
}

void apply(RunConfig& c, const Overrides& o) {
  if (o.out) c.output.directory = *o.out;
  if (o.seed) c.integrate.rng_seed = *o.seed;
  if (o.genus) {
    if (*o.genus < 2) bad("--genus must be at least 2");
    c.surface.set_genus(*o.genus);
  }
  c.validate();
}

bool StageReport::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

StageReport run_build(const RunConfig& c) {
  const auto s = build_surface(c.surface);
  const auto topo = validate_topology(s);
  StageReport r;
  r.data["surface"] = to_json(s);
  r.data["topology"] = to_json(topo);
  r.checks["euler_characteristic"] = topo.euler == topo.expected;

  json circles = json::array();
  for (const auto& h : s.handles) circles.push_back(to_json(verify_invariant_circle(s, h.index)));
  r.data["invariant_circles"] = circles;
  r.checks["invariant_circles"] = true;

  json jac = json::array();
  double worst = 0.0;
  const auto params = integration_of(c);
  for (const auto& p : seed_points(s, 24, c.integrate.rng_seed)) {
    const double det = area_jacobian(s, p, 1e-5, params);
    worst = std::max(worst, std::abs(det - 1.0));
    jac.push_back({{"point", to_json(p)}, {"det", det}});
  }
  r.data["time_one_jacobian"] = {{"samples", jac}, {"max_abs_det_minus_one", worst}};
  r.checks["area_preserving"] = worst <= 1e-4;
  return r;
}

StageReport run_fixed_points(const RunConfig& c) {
  const auto s = build_surface(c.surface);
  const auto rs = census(s, c);
  StageReport r;
  const long expected = 2L * s.genus() - 2;
  r.data["fixed_points"] = records_json(rs);
  r.data["expected_count"] = expected;
  r.checks["count"] = static_cast<long>(rs.size()) == expected;
  r.checks["hyperbolic_positive"] = all_of_records(rs, [](const FixedPointRecord& x) {
    return x.spectral_class == sp2::SpectralClass::HyperbolicPositive && std::abs(x.linearized.trace()) > 2.0 + 1e-6;
  });
  r.checks["unit_determinant"] =
      all_of_records(rs, [](const FixedPointRecord& x) { return std::abs(x.linearized.det() - 1.0) <= 1e-4; });
  r.checks["mean_index_zero"] =
      all_of_records(rs, [](const FixedPointRecord& x) { return std::abs(x.mean_index) <= 1e-6; });
  r.checks["cz_zero"] = all_of_records(rs, [](const FixedPointRecord& x) { return x.cz == 0; });
  return r;
}

StageReport run_periodic_search(const RunConfig& c) {
  const auto s = build_surface(c.surface);
  const auto rs = census(s, c);

  PeriodicSearchParams p;
  p.T = c.integrate.T;
  p.seeds = c.integrate.seeds;
  p.rng_seed = c.integrate.rng_seed;
  p.tol_close = c.integrate.tol_close;
  p.integration = integration_of(c);
  for (const auto& x : rs) p.fixed_points.push_back(x.location);
  const auto res = search_periodic_orbits(s, p);
  const auto part = separatrix_partition_check(s, res.visits);

  std::vector<double> slopes;
  for (const auto& t : s.tori) {
    slopes.push_back(t.slope.x);
    slopes.push_back(t.slope.y);
  }
  const auto fc = flux_condition_check(slopes, c.flux.Q, c.flux.delta);

  StageReport r;
  json search = to_json(res);
  json listed = json::array();
  const auto& all = search["events"];
  const std::size_t n = std::min<std::size_t>(all.size(), static_cast<std::size_t>(c.output.max_listed_events));
  for (std::size_t i = 0; i < n; ++i) listed.push_back(all[i]);
  search.erase("events");
  r.data["search"] = search;
  r.data["fixed_points"] = records_json(rs);
  r.data["closure_events"] = listed;
  r.data["closure_events_total"] = res.events.size();
  r.data["closure_events_listed"] = n;
  r.data["flagged"] = res.events.size() - res.unflagged();
  r.data["unflagged"] = res.unflagged();
  r.data["partition"] = to_json(part);
  r.data["flux_condition_holds"] = fc.holds;
  r.data["control_run"] = !fc.holds;
  r.checks["separatrix_partition"] = true;
  if (fc.holds) r.checks["no_unflagged_closures"] = res.unflagged() == 0;
  return r;
}

StageReport run_flux(const RunConfig& c) {
  const auto s = build_surface(c.surface);
  const auto q = c.flux.quadrature;
  const auto fv = flux_vector(s, q);
  const auto fine = flux_vector(s, {2 * q.n_s, 2 * q.n_t});
  double diff = 0.0;
  for (std::size_t i = 0; i < fv.entries.size(); ++i) diff = std::max(diff, std::abs(fv.entries[i] - fine.entries[i]));
  const auto fc = flux_condition_check(fv.entries, c.flux.Q, c.flux.delta);

  StageReport r;
  r.data["flux"] = to_json(fv);
  r.data["refinement_max_difference"] = diff;
  r.data["flux_condition"] = to_json(fc);
  r.checks["matches_configuration"] = true;
  r.checks["quadrature_invariance"] = diff <= 1e-12;
  r.checks["flux_condition"] = fc.holds;
  return r;
}

StageReport run_indices(const RunConfig& c) {
  StageReport r;
  json paths = json::array();
  bool expected_ok = true, bound_ok = true, shortcut_ok = true, iterate_ok = true, class_ok = true;
  for (const auto& spec : c.indices.paths) {
    const auto path = sp2::SymplecticPath::sample([&](double t) { return spec.at(t); }, 64);
    const double delta = sp2::mean_index(path);
    const auto cls = sp2::classify(path.end());
    json j{{"name", spec.name}, {"turns", spec.turns}, {"mean_index", delta}, {"class", sp2::to_string(cls)}};

    const bool pure_rotation = spec.generator == sp2::Mat2{0.0, 0.0, 0.0, 0.0};
    if (pure_rotation) {
      const bool ok = std::abs(delta - 2.0 * spec.turns) <= 1e-9;
      j["expected_mean_index"] = 2.0 * spec.turns;
      expected_ok = expected_ok && ok;
    }

    json iterates = json::array();
    for (unsigned k = 2; k <= c.indices.max_iterate; ++k) {
      const double dk = sp2::mean_index(sp2::iterate_path(path, k));
      const bool ok = std::abs(dk - k * delta) <= 1e-8;
      iterate_ok = iterate_ok && ok;
      iterates.push_back({{"k", k}, {"mean_index", dk}, {"error", dk - k * delta}});
    }
    j["iterates"] = iterates;

    if (cls != sp2::SpectralClass::Degenerate) {
      const int mu = sp2::cz_index(path);
      const int shortcut = sp2::cz_index_shortcut(delta, cls);
      j["cz"] = mu;
      j["cz_shortcut"] = shortcut;
      bound_ok = bound_ok && std::abs(delta - mu) < 1.0;
      shortcut_ok = shortcut_ok && mu == shortcut;
      if (cls == sp2::SpectralClass::Elliptic) {
        class_ok = class_ok && (mu % 2 != 0);
      } else {
        const bool even = mu % 2 == 0;
        class_ok = class_ok && std::abs(delta - mu) <= 1e-6 && (even == (cls == sp2::SpectralClass::HyperbolicPositive));
      }
    } else {
      j["cz"] = nullptr;
    }
    paths.push_back(j);
  }
  r.data["paths"] = paths;
  r.checks["rotation_mean_index"] = expected_ok;
  r.checks["cz_within_one"] = bound_ok;
  r.checks["cz_shortcut_agrees"] = shortcut_ok;
  r.checks["iterate_homogeneity"] = iterate_ok;
  r.checks["class_parity"] = class_ok;
  return r;
}

StageReport run_certify(const RunConfig& c) {
  const auto s = build_surface(c.surface);
  const bool constructed = !c.certify.index_data;
  const auto points = constructed ? index_data(census(s, c)) : *c.certify.index_data;
  const auto chain = chain_ranks(points);
  const auto hfn = hfn_from_lacunary(chain);
  const auto cert = classify_case(points, s.genus(), c.certify.N_prime_bound, c.certify.mode);

  StageReport r;
  json pts = json::array();
  for (const auto& p : points) pts.push_back(to_json(p));
  r.data["source"] = constructed ? "constructed" : "config";
  r.data["index_data"] = pts;
  r.data["chain"] = to_json(chain);
  r.data["hfn"] = to_json(hfn);
  r.data["certificate"] = to_json(cert);

  if (cert.status == CertificateStatus::Certified) {
    r.checks["certified_prime_count"] = static_cast<long>(cert.certified.size()) == cert.expected_prime_count;
  } else {
    r.checks["certified_prime_count"] = cert.certified.empty();
  }
  if (constructed) {
    const long lef = 2L * s.genus() - 2;
    r.checks["hfn_lacunary"] = hfn.lacunary;
    r.checks["hfn_ranks"] = hfn.lacunary && hfn.rank(0) == lef && chain.total() == lef;
    r.checks["lefschetz_minimum"] = cert.status == CertificateStatus::NoHypothesisSatisfied;
  }
  return r;
}

StageReport run_report(const RunConfig& c) {
  StageReport r;
  const std::pair<const char*, StageReport (*)(const RunConfig&)> stages[] = {
      {"build", run_build},   {"fixed_points", run_fixed_points}, {"periodic_search", run_periodic_search},
      {"flux", run_flux},     {"indices", run_indices},           {"certify", run_certify}};
  for (const auto& [name, fn] : stages) {
    const auto st = fn(c);
    r.data[name] = document(st);
    for (const auto& [k, v] : st.checks) r.checks[std::string(name) + "." + k] = v;
  }
  r.data["config"] = to_json(c);
  return r;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> v{"build",   "fixed-points", "periodic-search", "flux",
                                          "indices", "certify",      "report",          "all"};
  return v;
}

std::string beta_profile_csv(const GluedSurface& s, int samples) {
  std::ostringstream os;
  os.precision(17);
  os << "y,beta,beta_derivative\n";
  const double c = s.config.c, d = s.config.d;
  for (int k = 0; k < samples; ++k) {
    const double y = -1.0 + 2.0 * k / (samples - 1);
    os << y << ',' << beta(y, c, d) << ',' << beta_derivative(y, c, d) << '\n';
  }
  return os.str();
}

std::string level_sets_csv(const GluedSurface& s, const std::vector<double>& levels, int grid_y, int grid_phi) {
  std::ostringstream os;
  os.precision(17);
  os << "level,segment,chart,c1,c2\n";
  for (const auto& h : s.handles) {
    const double dy = 2.0 / grid_y, dp = 2.0 * M_PI / grid_phi;
    std::vector<double> H((grid_y + 1) * (grid_phi + 1));
    auto at = [&](int i, int k) -> double& { return H[i * (grid_phi + 1) + k]; };
    for (int i = 0; i <= grid_y; ++i) {
      for (int k = 0; k <= grid_phi; ++k) at(i, k) = hamiltonian_value(h, -1.0 + i * dy, -M_PI + k * dp);
    }
    const std::string chart = to_string(ChartId{ChartKind::Handle, h.index});
    long seg = 0;
    for (const double level : levels) {
      for (int i = 0; i < grid_y; ++i) {
        for (int k = 0; k < grid_phi; ++k) {
          const double y0 = -1.0 + i * dy, p0 = -M_PI + k * dp;
          // corners counter-clockwise from (y0, p0)
          const double v[4] = {at(i, k) - level, at(i + 1, k) - level, at(i + 1, k + 1) - level, at(i, k + 1) - level};
          const Vec2 corner[4] = {{y0, p0}, {y0 + dy, p0}, {y0 + dy, p0 + dp}, {y0, p0 + dp}};
          std::vector<Vec2> cuts;
          for (int e = 0; e < 4; ++e) {
            const double a = v[e], b = v[(e + 1) % 4];
            if ((a < 0.0) != (b < 0.0)) {
              const double t = a / (a - b);
              cuts.push_back(corner[e] + t * (corner[(e + 1) % 4] - corner[e]));
            }
          }
          for (std::size_t m = 0; m + 1 < cuts.size(); m += 2) {
            os << level << ',' << seg << ',' << chart << ',' << cuts[m].x << ',' << cuts[m].y << '\n';
            os << level << ',' << seg << ',' << chart << ',' << cuts[m + 1].x << ',' << cuts[m + 1].y << '\n';
            ++seg;
          }
        }
      }
    }
  }
  return os.str();
}

std::string fixed_point_markers_csv(const std::vector<FixedPointRecord>& records) {
  std::ostringstream os;
  os.precision(17);
  os << "id,chart,c1,c2,class,mean_index,cz\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << i << ',' << to_string(r.location.chart) << ',' << r.location.coords.x << ',' << r.location.coords.y << ','
       << sp2::to_string(r.spectral_class) << ',' << r.mean_index << ',' << r.cz << '\n';
  }
  return os.str();
}

std::string trajectories_csv(const GluedSurface& s, const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "trajectory,t,chart,c1,c2\n";
  const auto params = integration_of(c);
  const auto seeds = seed_points(s, c.output.trajectories, c.integrate.rng_seed);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto tr = integrate(s, seeds[i], c.output.trajectory_duration, params);
    for (const auto& smp : tr.samples) {
      os << i << ',' << smp.t << ',' << to_string(smp.point.chart) << ',' << smp.point.coords.x << ','
         << smp.point.coords.y << '\n';
    }
  }
  return os.str();
}

json error_json(const std::string& code, const std::string& message, const std::string& subcommand) {
  return {{"ok", false}, {"subcommand", subcommand}, {"error", {{"code", code}, {"message", message}}}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RunOutcome run(const std::string& subcommand, const RunConfig& c) {
  RunOutcome out;
  const std::filesystem::path dir = c.output.directory;
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, StageReport>> docs;
  try {
    if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
      bad("unknown subcommand '" + subcommand + "'");
    }
    std::filesystem::create_directories(dir);
    if (subcommand == "build") docs.emplace_back("build", run_build(c));
    else if (subcommand == "fixed-points") docs.emplace_back("fixed_points", run_fixed_points(c));
    else if (subcommand == "periodic-search") docs.emplace_back("periodic_search", run_periodic_search(c));
    else if (subcommand == "flux") docs.emplace_back("flux", run_flux(c));
    else if (subcommand == "indices") docs.emplace_back("indices", run_indices(c));
    else if (subcommand == "certify") docs.emplace_back("certify", run_certify(c));
    else {
      auto rep = run_report(c);
      if (subcommand == "all") {
        for (const auto& [name, st] : rep.data.items()) {
          if (name == "config") continue;
          StageReport part;
          part.data = st;
          part.data.erase("checks");
          part.data.erase("ok");
          for (const auto& [k, v] : st["checks"].items()) part.checks[k] = v.get<bool>();
          docs.emplace_back(name, std::move(part));
        }
      }
      docs.emplace_back("report", std::move(rep));
    }

    std::map<std::string, bool> checks;
    for (auto& [name, st] : docs) {
      if (name != "report") st.data["config"] = to_json(c);
      for (const auto& [k, v] : st.checks) checks[name == "report" ? k : name + "." + k] = v;
      if (c.output.wants("json")) {
        const auto file = dir / (name + ".json");
        write_file(file, dump(document(st)));
        out.artifacts.push_back(file);
      }
    }

    if (c.output.wants("csv") && (subcommand == "report" || subcommand == "all")) {
      const auto s = build_surface(c.surface);
      const auto rs = census(s, c);
      double hmax = 0.0;
      for (const auto& h : s.handles) {
        for (int k = 0; k < 64; ++k) hmax = std::max(hmax, std::abs(hamiltonian_value(h, 1.0, -M_PI + k * M_PI / 32)));
      }
      std::vector<double> levels;
      for (int k = -6; k <= 6; ++k) levels.push_back(hmax * k / 7.0);
      const std::pair<std::string, std::string> csvs[] = {{"trajectories.csv", trajectories_csv(s, c)},
                                                         {"beta_profile.csv", beta_profile_csv(s)},
                                                         {"level_sets.csv", level_sets_csv(s, levels)},
                                                         {"fixed_points.csv", fixed_point_markers_csv(rs)}};
      for (const auto& [name, content] : csvs) {
        write_file(dir / name, content);
        out.artifacts.push_back(dir / name);
      }
    }

    bool ok = true;
    for (const auto& [k, v] : checks) ok = ok && v;
    out.exit_code = ok ? 0 : 1;
    json arts = json::array();
    for (const auto& a : out.artifacts) arts.push_back(a.filename().string());
    out.summary = {{"ok", ok}, {"subcommand", subcommand}, {"checks", checks_json(checks)}, {"artifacts", arts}};
  } catch (const Error& e) {
    out.exit_code = 2;
    out.summary = error_json(std::string(to_string(e.code())), e.what(), subcommand);
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.summary = error_json("InternalError", e.what(), subcommand);
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::error_code ec;
  if (std::filesystem::is_directory(dir, ec)) {
    const std::string base = subcommand == "all" || subcommand == "report" ? "report" : docs.empty() ? subcommand : docs.front().first;
    if (out.exit_code == 2) {
      std::ofstream(dir / "error.json", std::ios::binary) << dump(out.summary);
    }
    const json meta{{"generated_at", iso_now()}, {"elapsed_seconds", elapsed}, {"threads", thread_budget()},
                    {"subcommand", subcommand}, {"exit_code", out.exit_code}};
    std::ofstream(dir / (base + ".meta.json"), std::ios::binary) << dump(meta);
  }
  return out;
}

} // namespace genusflow::cli
