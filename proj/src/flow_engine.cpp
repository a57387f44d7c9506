#include "genusflow/flow_engine.hpp"

#include "genusflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace genusflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxStep = 0.1;

double sign(double x) noexcept { return x < 0.0 ? -1.0 : 1.0; }

double wrap01(double x) noexcept {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double wrap_angle(double a) noexcept {
  double r = std::remainder(a, 2.0 * kPi);
  return r <= -kPi ? r + 2.0 * kPi : r;
}

double bump(double t) noexcept { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

Sector next(Sector s) noexcept {
  switch (s) {
  case Sector::Right: return Sector::Top;
  case Sector::Top: return Sector::Left;
  case Sector::Left: return Sector::Bottom;
  case Sector::Bottom: return Sector::Right;
  }
  return Sector::Right;
}

Sector prev(Sector s) noexcept { return next(next(next(s))); }

double handle_density(const GluedSurface& s, const ChartId& id) {
  return id.kind == ChartKind::Torus ? 1.0 : s.handles.at(id.index).area_density();
}

class Tracer {
public:
  Tracer(const GluedSurface& s, const IntegrationParams& p, SegmentSink* sink)
      : s_(s), p_(p), sink_(sink), sgn_(p.reverse ? -1.0 : 1.0) {}

  FlowSummary run(const SurfacePoint& start, double duration) {
    if (!(p_.step > 0.0)) throw Error(ErrorCode::PreconditionViolation, "step must be positive");
    if (p_.step > kMaxStep) {
      throw Error(ErrorCode::StepTooLarge, "step above " + std::to_string(kMaxStep) + " defeats event detection");
    }
    if (!(duration >= 0.0)) throw Error(ErrorCode::PreconditionViolation, "duration must be non-negative");
    if (!contains(s_, start)) throw Error(ErrorCode::OutsideDomain, "start point is outside the surface");
    cur_ = canonical(start);
    t_ = 0.0;
    end_ = duration;
    while (t_ < end_) {
      if (cur_.chart.kind == ChartKind::Torus) {
        torus_leg();
      } else {
        handle_leg();
      }
    }
    return {cur_, drift_, transitions_};
  }

private:
  void moved(const SurfacePoint& to) {
    ++transitions_;
    if (t_ == last_transition_t_) {
      if (++stuck_ > 3) throw Error(ErrorCode::StepTooLarge, "trajectory is trapped on a glued boundary");
    } else {
      stuck_ = 0;
    }
    last_transition_t_ = t_;
    if (sink_) sink_->transition(t_, cur_, to);
    cur_ = to;
  }

  void torus_leg() {
    const auto& tor = s_.tori[cur_.chart.index];
    const Vec2 v = sgn_ * tor.slope;
    const double speed = tor.speed();
    const double cap = 0.25 / std::max(std::abs(v.x), std::abs(v.y));
    const double tol = p_.tol_boundary;
    Vec2 pos = cur_.coords;

    while (t_ < end_) {
      const double chunk = std::min(end_ - t_, cap);
      double best = std::numeric_limits<double>::infinity();
      Vec2 hit{};
      for (const auto* sq : {&tor.right, &tor.left}) {
        if (!*sq) continue;
        const double h = 0.5 * (*sq)->side;
        const Vec2 e = (*sq)->along(), n = (*sq)->across();
        for (int kx = -1; kx <= 1; ++kx) {
          for (int ky = -1; ky <= 1; ++ky) {
            const Vec2 shift{static_cast<double>(kx), static_cast<double>(ky)};
            const Vec2 d = pos - (*sq)->center - shift;
            const double p0 = d.dot(e), q0 = d.dot(n);
            const double approach = sgn_ > 0 ? -h - p0 : p0 - h;
            if (approach < -tol || std::abs(q0) > h + tol) continue;
            const double th = std::max(approach, 0.0) / speed;
            if (th > chunk || th >= best) continue;
            if (std::abs(std::abs(q0) - h) <= tol) {
              std::ostringstream os;
              os << "torus " << tor.index << " flow line reaches a square corner at t=" << t_ + th;
              throw Error(ErrorCode::CornerHit, os.str());
            }
            best = th;
            hit = (*sq)->from_local({sgn_ > 0 ? -h : h, q0}) + shift;
          }
        }
      }
      if (best <= chunk) {
        if (best > 0.0 && sink_) sink_->torus_segment(tor.index, t_, pos, v, best);
        t_ += best;
        const SurfacePoint at = torus_point(tor.index, wrap01(hit.x), wrap01(hit.y));
        cur_ = at;
        const auto next_point = transition(s_, at, v, 10.0 * tol).point;
        moved(next_point);
        return;
      }
      if (sink_) sink_->torus_segment(tor.index, t_, pos, v, chunk);
      pos = {wrap01(pos.x + chunk * v.x), wrap01(pos.y + chunk * v.y)};
      t_ = chunk == end_ - t_ ? end_ : t_ + chunk;
      cur_ = torus_point(tor.index, pos.x, pos.y);
    }
  }

  Vec2 field(const HandleChart& h, double y, double phi, Sector sec) const {
    return sgn_ * handle_field(h, y, phi, sec);
  }

  Vec2 rk4(const HandleChart& h, Vec2 x, double dt, Sector sec) const {
    const Vec2 k1 = field(h, x.x, x.y, sec);
    const Vec2 k2 = field(h, x.x + 0.5 * dt * k1.x, x.y + 0.5 * dt * k1.y, sec);
    const Vec2 k3 = field(h, x.x + 0.5 * dt * k2.x, x.y + 0.5 * dt * k2.y, sec);
    const Vec2 k4 = field(h, x.x + dt * k3.x, x.y + dt * k3.y, sec);
    return x + (dt / 6.0) * Vec2{k1.x + 2 * k2.x + 2 * k3.x + k4.x, k1.y + 2 * k2.y + 2 * k3.y + k4.y};
  }

  template <class Cond>
  double first_time(const HandleChart& h, Vec2 x, double dt, Sector sec, Cond cond) const {
    double lo = 0.0, hi = dt;
    for (int it = 0; it < 200 && hi - lo > p_.event_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (cond(rk4(h, x, mid, sec))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

  Sector pick_sector(const HandleChart& h, double y, double phi) const {
    const Sector s = sector_of(phi);
    const auto [lo, hi] = sector_bounds(s, phi);
    if (hi - phi < 1e-12 && field(h, y, phi, s).y > 0.0) return next(s);
    if (phi - lo < 1e-12 && field(h, y, phi, s).y < 0.0) return prev(s);
    return s;
  }

  void handle_leg() {
    const auto& h = s_.handles[cur_.chart.index];
    Vec2 x = cur_.coords;
    x.y = wrap_angle(x.y);
    Sector sec = pick_sector(h, x.x, x.y);
    const double h0 = hamiltonian_jet(h, x.x, x.y, sec).H;

    auto track = [&](Vec2 at) { drift_ = std::max(drift_, std::abs(hamiltonian_jet(h, at.x, at.y, sec).H - h0)); };

    while (t_ < end_) {
      const double dt = std::min(p_.step, end_ - t_);
      const Vec2 x1 = rk4(h, x, dt, sec);
      const auto [lo, hi] = sector_bounds(sec, x.y);
      const bool exits = std::abs(x1.x) > 1.0;
      const bool crosses = x1.y < lo || x1.y > hi;
      if (!exits && !crosses) {
        if (sink_) sink_->handle_step(h.index, t_, x, t_ + dt, x1);
        x = x1;
        t_ = dt == end_ - t_ ? end_ : t_ + dt;
        track(x);
        x.y = wrap_angle(x.y);
        cur_ = handle_point(h.index, x.x, x.y);
        continue;
      }
      const double inf = std::numeric_limits<double>::infinity();
      const double t_exit = exits ? first_time(h, x, dt, sec, [](Vec2 z) { return std::abs(z.x) > 1.0; }) : inf;
      const double t_cross =
          crosses ? first_time(h, x, dt, sec, [lo = lo, hi = hi](Vec2 z) { return z.y < lo || z.y > hi; }) : inf;
      if (t_exit <= t_cross) {
        Vec2 xe = rk4(h, x, t_exit, sec);
        xe.x = sign(xe.x);
        if (sink_) sink_->handle_step(h.index, t_, x, t_ + t_exit, xe);
        t_ += t_exit;
        track(xe);
        xe.y = wrap_angle(xe.y);
        const double m = std::max(std::abs(std::cos(xe.y)), std::abs(std::sin(xe.y)));
        const double half = 0.5 * h.eps;
        if (std::abs(half * std::abs(std::cos(xe.y)) / m - half * std::abs(std::sin(xe.y)) / m) <=
            p_.tol_boundary) {
          std::ostringstream os;
          os << "handle " << h.index << " trajectory leaves through a square corner at t=" << t_;
          throw Error(ErrorCode::CornerHit, os.str());
        }
        cur_ = handle_point(h.index, xe.x, xe.y);
        moved(transition(s_, cur_, {0.0, 0.0}).point);
        return;
      }
      Vec2 xc = rk4(h, x, t_cross, sec);
      const bool upward = xc.y > hi || (xc.y >= lo && xc.y - lo > hi - xc.y);
      xc.y = upward ? hi : lo;
      if (sink_) sink_->handle_step(h.index, t_, x, t_ + t_cross, xc);
      t_ += t_cross;
      track(xc);
      sec = upward ? next(sec) : prev(sec);
      x = xc;
      x.y = wrap_angle(x.y);
      cur_ = handle_point(h.index, x.x, x.y);
    }
  }

  const GluedSurface& s_;
  const IntegrationParams& p_;
  SegmentSink* sink_;
  double sgn_;
  SurfacePoint cur_;
  double t_ = 0.0, end_ = 0.0;
  double drift_ = 0.0;
  int transitions_ = 0;
  double last_transition_t_ = -1.0;
  int stuck_ = 0;
};

class Recorder final : public SegmentSink {
public:
  explicit Recorder(Trajectory& out) : out_(out) {}

  void torus_segment(int torus, double t0, Vec2 start, Vec2 v, double duration) override {
    const Vec2 e = start + duration * v;
    push(t0 + duration, torus_point(torus, wrap01(e.x), wrap01(e.y)));
  }
  void handle_step(int handle, double, Vec2, double t1, Vec2 to) override {
    push(t1, handle_point(handle, to.x, wrap_angle(to.y)));
  }
  void transition(double t, const SurfacePoint& from, const SurfacePoint& to) override {
    out_.events.push_back({t, from, to});
    if (!out_.samples.empty() && out_.samples.back().t == t) {
      out_.samples.back().point = to;
    } else {
      out_.samples.push_back({t, to});
    }
  }

private:
  void push(double t, const SurfacePoint& p) {
    if (!out_.samples.empty() && out_.samples.back().t >= t) return;
    out_.samples.push_back({t, p});
  }
  Trajectory& out_;
};

} // namespace

double beta(double y, double c, double d) noexcept {
  const double t = (std::abs(y) - c) / (1.0 - d - c);
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump(t), b = bump(1.0 - t);
  return a / (a + b);
}

double beta_derivative(double y, double c, double d) noexcept {
  const double w = 1.0 - d - c;
  const double t = (std::abs(y) - c) / w;
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = bump(t), b = bump(1.0 - t);
  const double da = a / (t * t), db = b / ((1.0 - t) * (1.0 - t));
  return sign(y) * (da * b + a * db) / ((a + b) * (a + b)) / w;
}

HamiltonianJet hamiltonian_jet(const HandleChart& h, double y, double phi, Sector s) {
  const double big_a = std::min(h.speed_left, h.speed_right);
  const double a_end = y < 0.0 ? h.speed_left : h.speed_right;
  const double b = beta(y, h.c, h.d), db = beta_derivative(y, h.c, h.d);
  const double sg = sign(y);
  const double g = big_a * (1.0 - b) * y + b * sg * a_end;
  const double dg = big_a * (1.0 - b) - big_a * db * y + db * sg * a_end;
  const SectionJet z = h.section_jet(y, phi, s);
  return {g * z.z, dg * z.z + g * z.z_y, g * z.z_phi};
}

double hamiltonian_value(const HandleChart& h, double y, double phi) {
  return hamiltonian_jet(h, y, phi, sector_of(phi)).H;
}

Vec2 handle_field(const HandleChart& h, double y, double phi, Sector s) {
  const auto j = hamiltonian_jet(h, y, phi, s);
  const double k = h.area_density();
  return {j.H_phi / k, -j.H_y / k};
}

Vec2 vector_field(const GluedSurface& s, const SurfacePoint& p) {
  if (!contains(s, p)) throw Error(ErrorCode::OutsideDomain, "point " + to_string(p.chart) + " outside the surface");
  if (p.chart.kind == ChartKind::Torus) return s.tori[p.chart.index].slope;
  return handle_field(s.handles[p.chart.index], p.coords.x, p.coords.y, sector_of(p.coords.y));
}

IntegrationParams IntegrationParams::from_json(const nlohmann::json& j) {
  IntegrationParams p;
  if (!j.is_object()) throw Error(ErrorCode::BadConfig, "integration parameters must be an object");
  auto read = [&](const char* key, double& v) {
    if (!j.contains(key)) return;
    if (!j[key].is_number() || !(j[key].get<double>() > 0.0)) {
      throw Error(ErrorCode::BadConfig, std::string(key) + " must be a positive number");
    }
    v = j[key].get<double>();
  };
  read("step", p.step);
  read("tol_boundary", p.tol_boundary);
  read("tol_H", p.tol_H);
  return p;
}

FlowSummary trace(const GluedSurface& s, const SurfacePoint& start, double duration,
                  const IntegrationParams& params, SegmentSink* sink) {
  return Tracer(s, params, sink).run(start, duration);
}

std::string Trajectory::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,chart,c1,c2\n";
  for (const auto& s : samples) {
    os << s.t << ',' << to_string(s.point.chart) << ',' << s.point.coords.x << ',' << s.point.coords.y << '\n';
  }
  return os.str();
}

Trajectory integrate(const GluedSurface& s, const SurfacePoint& start, double duration,
                     const IntegrationParams& params) {
  Trajectory out;
  out.samples.push_back({0.0, canonical(start)});
  Recorder rec(out);
  out.max_energy_drift = trace(s, start, duration, params, &rec).max_energy_drift;
  return out;
}

SurfacePoint time_one_map(const GluedSurface& s, const SurfacePoint& p, const IntegrationParams& params) {
  return trace(s, p, 1.0, params).end;
}

Vec2 chart_delta(const SurfacePoint& a, const SurfacePoint& b) {
  if (!(a.chart == b.chart)) {
    throw Error(ErrorCode::OutsideDomain, "points lie in different charts " + to_string(a.chart) + ", " +
                                              to_string(b.chart));
  }
  const double dx = a.coords.x - b.coords.x, dy = a.coords.y - b.coords.y;
  if (a.chart.kind == ChartKind::Torus) return {dx - std::round(dx), dy - std::round(dy)};
  return {dx, wrap_angle(dy)};
}

MapJacobian flow_jacobian(const GluedSurface& s, const SurfacePoint& p, double t, double h,
                          const IntegrationParams& params) {
  auto shifted = [&](double dx, double dy) {
    SurfacePoint q = p;
    q.coords = q.coords + Vec2{dx, dy};
    return trace(s, q, t, params).end;
  };
  const SurfacePoint xp = shifted(h, 0), xm = shifted(-h, 0), yp = shifted(0, h), ym = shifted(0, -h);
  const Vec2 cx = (1.0 / (2 * h)) * chart_delta(xp, xm);
  const Vec2 cy = (1.0 / (2 * h)) * chart_delta(yp, ym);
  chart_delta(xp, yp);
  return {cx.x, cy.x, cx.y, cy.y, p.chart, xp.chart};
}

MapJacobian time_one_jacobian(const GluedSurface& s, const SurfacePoint& p, double h,
                              const IntegrationParams& params) {
  return flow_jacobian(s, p, 1.0, h, params);
}

double area_jacobian(const GluedSurface& s, const SurfacePoint& p, double h, const IntegrationParams& params) {
  auto measured = [&](double k) {
    const auto j = time_one_jacobian(s, p, k, params);
    return j.det() * handle_density(s, j.target) / handle_density(s, j.source);
  };
  // Strongly sheared points need a smaller step; shrink until stable.
  double prev = measured(h);
  for (int i = 0; i < 4; ++i) {
    h /= 4.0;
    const double cur = measured(h);
    if (std::abs(cur - prev) < 1e-7) return cur;
    prev = cur;
  }
  return prev;
}

} // namespace genusflow
