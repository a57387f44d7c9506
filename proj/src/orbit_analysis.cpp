#include "genusflow/orbit_analysis.hpp"

#include "genusflow/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace genusflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) noexcept {
  double r = std::remainder(a, 2.0 * kPi);
  return r <= -kPi ? r + 2.0 * kPi : r;
}

double wrap_half(double x) noexcept { return x - std::round(x); }

double frac(double x) noexcept { return x - std::floor(x); }

int expected_fixed_points(const GluedSurface& s) { return 2 * (s.genus() - 1); }

double halton(std::uint64_t i, std::uint64_t base) noexcept {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

struct Pass {
  double a, b, s_min, d_min;
};

// Sub-interval of [lo, hi] on which |w + s v| < r, with the closest approach.
std::optional<Pass> pass_within(Vec2 w, Vec2 v, double lo, double hi, double r) {
  if (hi < lo) return std::nullopt;
  const double vv = v.dot(v), wv = w.dot(v), ww = w.dot(w);
  const double s_star = vv > 0.0 ? std::clamp(-wv / vv, lo, hi) : lo;
  const double d_min = (w + s_star * v).norm();
  if (!(d_min < r)) return std::nullopt;
  if (vv == 0.0) return Pass{lo, hi, s_star, d_min};
  const double sq = std::sqrt(std::max(wv * wv - vv * (ww - r * r), 0.0));
  return Pass{std::max(lo, (-wv - sq) / vv), std::min(hi, (-wv + sq) / vv), s_star, d_min};
}

// Offsets of `p` relative to `origin` in the chart of both, one per nearby periodic image.
std::vector<Vec2> images(const SurfacePoint& p, const SurfacePoint& origin) {
  std::vector<Vec2> out;
  if (p.chart.kind == ChartKind::Torus) {
    const Vec2 w{wrap_half(p.coords.x - origin.coords.x), wrap_half(p.coords.y - origin.coords.y)};
    for (int kx = -1; kx <= 1; ++kx) {
      for (int ky = -1; ky <= 1; ++ky) out.push_back(w + Vec2{double(kx), double(ky)});
    }
  } else {
    const Vec2 w{p.coords.x - origin.coords.x, wrap_angle(p.coords.y - origin.coords.y)};
    for (int k = -1; k <= 1; ++k) out.push_back(w + Vec2{0.0, 2.0 * kPi * k});
  }
  return out;
}

class ClosureSink final : public SegmentSink {
public:
  ClosureSink(const GluedSurface& s, int index, const SurfacePoint& seed, const PeriodicSearchParams& p,
              const std::vector<SurfacePoint>& fixed)
      : index_(index), seed_(seed), p_(p), fixed_(fixed), shadow_(p.shadow_factor * p.tol_close) {
    const auto n = static_cast<std::size_t>(std::max(s.genus() - 1, 0));
    visits_.trajectory = index;
    visits_.minus.assign(n, 0);
    visits_.plus.assign(n, 0);
    mark(seed);
  }

  void torus_segment(int torus, double t0, Vec2 start, Vec2 v, double duration) override {
    const SurfacePoint from = torus_point(torus, start.x, start.y);
    mark(from);
    segment(from, v, t0, duration);
  }

  void handle_step(int handle, double t0, Vec2 from, double t1, Vec2 to) override {
    const SurfacePoint a = handle_point(handle, from.x, from.y);
    mark(a);
    mark(handle_point(handle, to.x, to.y));
    const double dt = t1 - t0;
    if (dt <= 0.0) return;
    const bool crosses = (from.x < 0.0) != (to.x < 0.0);
    if (crosses || std::min(std::abs(from.x), std::abs(to.x)) < shadow_) near_circle_t_ = std::min(near_circle_t_, t0);
    segment(a, (1.0 / dt) * (to - from), t0, dt);
  }

  std::vector<ClosureEvent> finish() {
    flush();
    return std::move(events_);
  }
  VisitRecord visits() const { return visits_; }

private:
  void mark(const SurfacePoint& q) {
    const int i = q.chart.index;
    const int n = static_cast<int>(visits_.minus.size());
    if (q.chart.kind == ChartKind::Torus) {
      if (i < n) visits_.minus[i] = 1;
      if (i > 0) visits_.plus[i - 1] = 1;
    } else if (q.coords.x < 0.0) {
      visits_.minus[i] = 1;
    } else if (q.coords.x > 0.0) {
      visits_.plus[i] = 1;
    }
  }

  void segment(const SurfacePoint& from, Vec2 v, double t0, double dt) {
    for (const auto& f : fixed_) {
      if (!(f.chart == from.chart)) continue;
      for (const Vec2 w : images(from, f)) {
        if (auto hit = pass_within(w, v, 0.0, dt, shadow_)) near_fp_t_ = std::min(near_fp_t_, t0 + hit->a);
      }
    }
    if (!(from.chart == seed_.chart)) return;
    const double lo = std::max(0.0, p_.t_min - t0);
    std::vector<Pass> passes;
    for (const Vec2 w : images(from, seed_)) {
      if (auto hit = pass_within(w, v, lo, dt, p_.tol_close)) passes.push_back(*hit);
    }
    std::sort(passes.begin(), passes.end(), [](const Pass& x, const Pass& y) { return x.a < y.a; });
    for (const auto& q : passes) add(t0 + q.a, t0 + q.b, t0 + q.s_min, q.d_min);
  }

  void add(double a, double b, double t_best, double d) {
    if (open_ && a <= run_end_ + 1e-12) {
      run_end_ = std::max(run_end_, b);
      if (d < best_d_) {
        best_d_ = d;
        best_t_ = t_best;
      }
      return;
    }
    flush();
    open_ = true;
    run_end_ = b;
    best_d_ = d;
    best_t_ = t_best;
  }

  void flush() {
    if (!open_) return;
    open_ = false;
    ClosureEvent e;
    e.seed_index = index_;
    e.seed = seed_;
    e.t_return = best_t_;
    e.distance = best_d_;
    e.near_fixed_point = near_fp_t_ <= best_t_;
    e.near_circle = near_circle_t_ <= best_t_;
    events_.push_back(e);
  }

  int index_;
  SurfacePoint seed_;
  const PeriodicSearchParams& p_;
  const std::vector<SurfacePoint>& fixed_;
  double shadow_;
  double near_fp_t_ = kInf, near_circle_t_ = kInf;
  bool open_ = false;
  double run_end_ = 0.0, best_d_ = 0.0, best_t_ = 0.0;
  std::vector<ClosureEvent> events_;
  VisitRecord visits_;
};

FixedPointRecord linearize(const GluedSurface& s, const SurfacePoint& x, const FixedPointOptions& opts) {
  FixedPointRecord r;
  r.location = canonical(x);
  r.residual = chart_distance(time_one_map(s, x, opts.integration), r.location);
  if (!(r.residual < opts.tol_fp)) {
    std::ostringstream os;
    os << "field zero at " << to_string(x.chart) << " moves by " << r.residual << " under the time-one map";
    throw Error(ErrorCode::NewtonDiverged, os.str());
  }
  const auto j = time_one_jacobian(s, x, opts.fd_step, opts.integration);
  r.linearized = sp2::SymplecticMatrix2::from_entries(j.a, j.b, j.c, j.d, 1e-4);
  r.spectral_class = sp2::classify(r.linearized);
  const double tr = r.linearized.trace(), det = r.linearized.det();
  const std::complex<double> root = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
  r.eigenvalues = {0.5 * (tr + root), 0.5 * (tr - root)};

  const auto path = sp2::SymplecticPath::sample(
      [&](double t) {
        if (t <= 0.0) return sp2::SymplecticMatrix2::identity();
        const auto m = t >= 1.0 ? j : flow_jacobian(s, x, t, opts.fd_step, opts.integration);
        return sp2::SymplecticMatrix2::normalized({m.a, m.b, m.c, m.d});
      },
      opts.path_samples);
  r.mean_index = sp2::mean_index(path);
  r.cz = sp2::cz_index(path);
  return r;
}

} // namespace

SurfacePoint newton_zero(const GluedSurface& s, const SurfacePoint& guess, double tol) {
  if (guess.chart.kind != ChartKind::Handle) {
    throw Error(ErrorCode::PreconditionViolation, "Newton iteration runs in handle charts");
  }
  const auto& h = s.handles.at(guess.chart.index);
  auto field = [&](Vec2 x) { return handle_field(h, x.x, x.y, sector_of(wrap_angle(x.y))); };
  Vec2 x = guess.coords;
  const double fd = 1e-7;
  for (int it = 0; it < 60; ++it) {
    const Vec2 f = field(x);
    if (f.norm() < tol) return canonical(handle_point(h.index, x.x, x.y));
    const Vec2 fy = (1.0 / (2 * fd)) * (field(x + Vec2{fd, 0}) - field(x - Vec2{fd, 0}));
    const Vec2 fp = (1.0 / (2 * fd)) * (field(x + Vec2{0, fd}) - field(x - Vec2{0, fd}));
    const double det = fy.x * fp.y - fp.x * fy.y;
    if (det == 0.0 || !std::isfinite(det)) break;
    Vec2 dx{-(fp.y * f.x - fp.x * f.y) / det, -(-fy.y * f.x + fy.x * f.y) / det};
    if (dx.norm() > 0.1) dx = (0.1 / dx.norm()) * dx;
    x = x + dx;
    if (std::abs(x.x) > 1.0) break;
    if (dx.norm() < 1e-15) return canonical(handle_point(h.index, x.x, x.y));
  }
  std::ostringstream os;
  os << "Newton iteration from (" << guess.coords.x << ", " << guess.coords.y << ") on handle " << h.index
     << " did not converge";
  throw Error(ErrorCode::NewtonDiverged, os.str());
}

std::vector<FixedPointRecord> find_fixed_points(const GluedSurface& s, const FixedPointOptions& opts) {
  std::vector<SurfacePoint> zeros;
  auto add = [&](const SurfacePoint& z) {
    for (const auto& q : zeros) {
      if (chart_distance(q, z) < 1e-6) return;
    }
    zeros.push_back(z);
  };

  for (const auto& h : s.handles) {
    add(newton_zero(s, handle_point(h.index, 0.0, 0.0)));
    add(newton_zero(s, handle_point(h.index, 0.0, kPi)));
  }

  for (const auto& t : s.tori) {
    for (int i = 0; i < opts.torus_grid; ++i) {
      for (int j = 0; j < opts.torus_grid; ++j) {
        const SurfacePoint p = torus_point(t.index, (i + 0.5) / opts.torus_grid, (j + 0.5) / opts.torus_grid);
        if (contains(s, p) && vector_field(s, p).norm() == 0.0) add(p);
      }
    }
  }

  const int ny = opts.grid_y, np = opts.grid_phi;
  for (const auto& h : s.handles) {
    const double scale = 0.25 * std::min(h.speed_left, h.speed_right);
    std::vector<double> mag(static_cast<std::size_t>((ny + 1) * np));
    auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(i * np + ((j % np) + np) % np)]; };
    auto y_of = [&](int i) { return -1.0 + 2.0 * i / ny; };
    auto phi_of = [&](int j) { return -kPi + 2.0 * kPi * j / np; };
    for (int i = 0; i <= ny; ++i) {
      for (int j = 0; j < np; ++j) at(i, j) = handle_field(h, y_of(i), phi_of(j), sector_of(phi_of(j))).norm();
    }
    for (int i = 1; i < ny; ++i) {
      for (int j = 0; j < np; ++j) {
        const double m = at(i, j);
        if (m >= scale) continue;
        bool minimum = true;
        for (int di = -1; di <= 1 && minimum; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            if ((di || dj) && at(i + di, j + dj) < m) {
              minimum = false;
              break;
            }
          }
        }
        if (!minimum) continue;
        try {
          add(newton_zero(s, handle_point(h.index, y_of(i), phi_of(j))));
        } catch (const Error&) {
          // a near-zero of |X| that is not a zero
        }
      }
    }
  }

  std::vector<FixedPointRecord> out;
  out.reserve(zeros.size());
  for (const auto& z : zeros) out.push_back(linearize(s, z, opts));
  std::sort(out.begin(), out.end(), [](const FixedPointRecord& a, const FixedPointRecord& b) {
    const auto ka = std::make_tuple(int(a.location.chart.kind), a.location.chart.index, std::abs(a.location.coords.y),
                                    a.location.coords.x);
    const auto kb = std::make_tuple(int(b.location.chart.kind), b.location.chart.index, std::abs(b.location.coords.y),
                                    b.location.coords.x);
    return ka < kb;
  });

  if (opts.require_expected_count && static_cast<int>(out.size()) != expected_fixed_points(s)) {
    std::ostringstream os;
    os << "found " << out.size() << " fixed points, expected " << expected_fixed_points(s);
    throw Error(ErrorCode::UnexpectedFixedPointCount, os.str());
  }
  return out;
}

std::size_t PeriodicSearchResult::unflagged() const noexcept {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const ClosureEvent& e) {
    return !e.flagged();
  }));
}

std::vector<SurfacePoint> seed_points(const GluedSurface& s, int n, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double shift[3] = {unit(), unit(), unit()};

  std::vector<std::pair<double, ChartId>> cumulative;
  double total = 0.0;
  const double eps = s.config.epsilon;
  for (const auto& t : s.tori) {
    const int squares = int(bool(t.right)) + int(bool(t.left));
    total += 1.0 - squares * eps * eps;
    cumulative.emplace_back(total, ChartId{ChartKind::Torus, t.index});
  }
  for (const auto& h : s.handles) {
    total += kPi * h.eps;
    cumulative.emplace_back(total, ChartId{ChartKind::Handle, h.index});
  }

  std::vector<SurfacePoint> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (std::uint64_t k = 1; static_cast<int>(out.size()) < n; ++k) {
    const double u0 = frac(halton(k, 2) + shift[0]) * total;
    const double u1 = frac(halton(k, 3) + shift[1]);
    const double u2 = frac(halton(k, 5) + shift[2]);
    ChartId chart = cumulative.back().second;
    for (const auto& [edge, id] : cumulative) {
      if (u0 < edge) {
        chart = id;
        break;
      }
    }
    const SurfacePoint p = chart.kind == ChartKind::Torus ? torus_point(chart.index, u1, u2)
                                                          : handle_point(chart.index, 2.0 * u1 - 1.0, 2.0 * kPi * u2 - kPi);
    if (contains(s, p)) out.push_back(p);
  }
  return out;
}

int thread_budget(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("GENUSFLOW_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

PeriodicSearchResult search_periodic_orbits(const GluedSurface& s, const PeriodicSearchParams& params) {
  if (!(params.T > 0.0)) throw Error(ErrorCode::PreconditionViolation, "T must be positive");
  if (params.seeds < 1 && params.start_points.empty()) throw Error(ErrorCode::PreconditionViolation, "at least one seed is required");
  if (!(params.tol_close > 0.0)) throw Error(ErrorCode::PreconditionViolation, "tol_close must be positive");

  PeriodicSearchResult out;
  out.params = params;
  if (out.params.fixed_points.empty()) {
    FixedPointOptions fo;
    fo.require_expected_count = false;
    fo.integration = params.integration;
    for (const auto& r : find_fixed_points(s, fo)) out.params.fixed_points.push_back(r.location);
  }
  out.seeds = params.start_points.empty() ? seed_points(s, params.seeds, params.rng_seed) : params.start_points;
  for (const auto& p : out.seeds) {
    if (!contains(s, p)) throw Error(ErrorCode::OutsideDomain, "start point outside the surface");
  }

  const std::size_t n = out.seeds.size();
  std::vector<std::vector<ClosureEvent>> events(n);
  std::vector<std::optional<VisitRecord>> visits(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      ClosureSink sink(s, static_cast<int>(i), out.seeds[i], out.params, out.params.fixed_points);
      try {
        trace(s, out.seeds[i], params.T, params.integration, &sink);
        events[i] = sink.finish();
        visits[i] = sink.visits();
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  const int workers = std::min<int>(thread_budget(params.threads), static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      out.skipped.push_back({static_cast<int>(i), errors[i]});
      continue;
    }
    out.events.insert(out.events.end(), events[i].begin(), events[i].end());
    out.visits.push_back(*visits[i]);
  }
  std::stable_sort(out.events.begin(), out.events.end(), [](const ClosureEvent& a, const ClosureEvent& b) {
    return std::tie(a.seed_index, a.t_return) < std::tie(b.seed_index, b.t_return);
  });
  return out;
}

InvariantCircleReport verify_invariant_circle(const GluedSurface& s, int handle) {
  if (handle < 0 || handle >= static_cast<int>(s.handles.size())) {
    throw Error(ErrorCode::PreconditionViolation, "no handle " + std::to_string(handle));
  }
  const auto& h = s.handles[static_cast<std::size_t>(handle)];
  return verify_invariant_circle(handle, [&h](double y, double phi) { return handle_field(h, y, phi, sector_of(phi)); });
}

InvariantCircleReport verify_invariant_circle(int handle, const HandleFieldFn& field, int samples) {
  InvariantCircleReport r;
  r.handle = handle;
  r.samples = samples;
  const double rest_tol = 1e-10;
  std::vector<double> phis(static_cast<std::size_t>(samples)), rate(phis.size());
  for (int k = 0; k < samples; ++k) {
    phis[k] = -kPi + 2.0 * kPi * k / samples;
    const Vec2 f = field(0.0, phis[k]);
    r.max_abs_ydot = std::max(r.max_abs_ydot, std::abs(f.x));
    rate[k] = f.y;
  }
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvariantCircleViolation, "handle " + std::to_string(handle) + ": " + why);
  };
  if (r.max_abs_ydot > 1e-10) {
    std::ostringstream os;
    os << "dy/dt reaches " << r.max_abs_ydot << " on y = 0";
    fail(os.str());
  }

  auto rate_at = [&](double phi) { return field(0.0, phi).y; };
  for (int k = 0; k < samples; ++k) {
    const int k1 = (k + 1) % samples;
    const double a = rate[k], b = rate[k1];
    if (std::abs(a) <= rest_tol) {
      r.rest_points.push_back(phis[k]);
    } else if (std::abs(b) > rest_tol && (a < 0.0) != (b < 0.0)) {
      double lo = phis[k], hi = lo + 2.0 * kPi / samples;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((rate_at(mid) < 0.0) == (a < 0.0) ? lo : hi) = mid;
      }
      r.rest_points.push_back(wrap_angle(0.5 * (lo + hi)));
    }
  }
  std::sort(r.rest_points.begin(), r.rest_points.end());
  if (r.rest_points.size() != 2) {
    fail("expected 2 rest points on y = 0, found " + std::to_string(r.rest_points.size()));
  }
  for (std::size_t i = 0; i < r.rest_points.size(); ++i) {
    const double a = r.rest_points[i];
    double b = r.rest_points[(i + 1) % r.rest_points.size()];
    if (b <= a) b += 2.0 * kPi;
    const double v = rate_at(wrap_angle(0.5 * (a + b)));
    r.arc_signs.push_back(v > 0.0 ? 1 : -1);
    for (int k = 0; k < samples; ++k) {
      double p = phis[k];
      if (p <= a) p += 2.0 * kPi;
      if (p > a + 1e-9 && p < b - 1e-9 && std::abs(rate[k]) > rest_tol && (rate[k] > 0.0) != (v > 0.0)) {
        fail("dphi/dt changes sign inside an arc");
      }
    }
  }
  if (r.arc_signs[0] == r.arc_signs[1]) fail("both arcs rotate the same way; no heteroclinic pair");
  return r;
}

VisitRecord visits_of(const GluedSurface& s, const Trajectory& t, int id) {
  VisitRecord v;
  v.trajectory = id;
  const auto n = static_cast<std::size_t>(std::max(s.genus() - 1, 0));
  v.minus.assign(n, 0);
  v.plus.assign(n, 0);
  for (const auto& smp : t.samples) {
    const auto& q = smp.point;
    const auto i = static_cast<std::size_t>(q.chart.index);
    if (q.chart.kind == ChartKind::Torus) {
      if (i < n) v.minus[i] = 1;
      if (i > 0) v.plus[i - 1] = 1;
    } else if (q.coords.x < 0.0) {
      v.minus[i] = 1;
    } else if (q.coords.x > 0.0) {
      v.plus[i] = 1;
    }
  }
  return v;
}

PartitionReport separatrix_partition_check(const GluedSurface& s, const std::vector<Trajectory>& trajectories) {
  std::vector<VisitRecord> v;
  v.reserve(trajectories.size());
  for (std::size_t i = 0; i < trajectories.size(); ++i) v.push_back(visits_of(s, trajectories[i], static_cast<int>(i)));
  return separatrix_partition_check(s, v);
}

PartitionReport separatrix_partition_check(const GluedSurface& s, const std::vector<VisitRecord>& visits) {
  PartitionReport r;
  const auto n = s.handles.size();
  for (const auto& v : visits) {
    if (v.minus.size() != n || v.plus.size() != n) {
      throw Error(ErrorCode::PreconditionViolation, "visit record does not match the handle count");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (v.minus[i] && v.plus[i]) {
        throw Error(ErrorCode::PartitionViolation, "trajectory " + std::to_string(v.trajectory) +
                                                       " visits both sides of handle " + std::to_string(i));
      }
      if (v.minus[i] || v.plus[i]) ++r.handle_visits;
    }
    ++r.trajectories;
  }
  return r;
}

nlohmann::json to_json(const FixedPointRecord& r) {
  const auto& m = r.linearized;
  nlohmann::json eig = nlohmann::json::array();
  for (const auto& e : r.eigenvalues) eig.push_back({e.real(), e.imag()});
  return {{"location", to_json(r.location)},
          {"linearized", {{m.a(), m.b()}, {m.c(), m.d()}}},
          {"det", m.det()},
          {"trace", m.trace()},
          {"class", sp2::to_string(r.spectral_class)},
          {"eigenvalues", eig},
          {"mean_index", r.mean_index},
          {"cz", r.cz},
          {"residual", r.residual}};
}

nlohmann::json to_json(const ClosureEvent& e) {
  return {{"seed_index", e.seed_index}, {"seed", to_json(e.seed)},          {"t_return", e.t_return},
          {"distance", e.distance},     {"near_fixed_point", e.near_fixed_point}, {"near_circle", e.near_circle},
          {"flagged", e.flagged()}};
}

nlohmann::json to_json(const PeriodicSearchResult& r) {
  nlohmann::json events = nlohmann::json::array(), skipped = nlohmann::json::array();
  for (const auto& e : r.events) events.push_back(to_json(e));
  for (const auto& k : r.skipped) skipped.push_back({{"seed_index", k.seed_index}, {"error", k.error}});
  return {{"T", r.params.T},
          {"seeds", r.params.seeds},
          {"rng_seed", r.params.rng_seed},
          {"tol_close", r.params.tol_close},
          {"T_times_tol_close", r.params.T * r.params.tol_close},
          {"t_min", r.params.t_min},
          {"shadow_radius", r.params.shadow_factor * r.params.tol_close},
          {"events", events},
          {"unflagged", r.unflagged()},
          {"skipped", skipped}};
}

nlohmann::json to_json(const InvariantCircleReport& r) {
  return {{"handle", r.handle},
          {"samples", r.samples},
          {"max_abs_ydot", r.max_abs_ydot},
          {"rest_points", r.rest_points},
          {"arc_signs", r.arc_signs}};
}

nlohmann::json to_json(const PartitionReport& r) {
  return {{"trajectories", r.trajectories}, {"handle_visits", r.handle_visits}};
}

} // namespace genusflow
