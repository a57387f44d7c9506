#include "genusflow/flux_meter.hpp"

#include "genusflow/error.hpp"
#include "genusflow/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace genusflow {

namespace {

double wrap01(double x) noexcept {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

// Circle distance from the arc [a, a + len] (len >= 0) to the interval
// [c - h, c + h] on R / Z.
double arc_gap(double a, double len, double c, double h) {
  if (len + 2.0 * h >= 1.0) return 0.0;
  // shift so the arc starts at 0, then measure to the interval on both sides
  const double lo = wrap01(c - h - a);
  const double hi = lo + 2.0 * h;
  if (lo <= len || hi >= 1.0) return 0.0;
  return std::min(lo - len, 1.0 - hi);
}

// Distance from the lines {coord = a + t drift, t in [0, 1]} to the cutouts of a torus.
double line_clearance(const TorusChart& t, LoopKind kind, double a, double drift) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto* sq : {&t.right, &t.left}) {
    if (!*sq) continue;
    const double c = kind == LoopKind::Vertical ? (*sq)->center.x : (*sq)->center.y;
    const double start = drift >= 0.0 ? a : a + drift;
    best = std::min(best, arc_gap(start, std::abs(drift), c, (*sq)->half_extent()));
  }
  return best;
}

double integrand(Vec2 x, Vec2 tangent) { return x.x * tangent.y - x.y * tangent.x; }

} // namespace

std::string to_string(LoopKind k) { return k == LoopKind::Vertical ? "vertical" : "horizontal"; }

std::vector<GeneratorLoop> generator_loops(const GluedSurface& s, const LoopOptions& opts) {
  if (!(opts.scan_step > 0.0 && opts.scan_step <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "offset scan step must lie in (0, 1]");
  }
  std::vector<GeneratorLoop> out;
  const int steps = static_cast<int>(std::floor(1.0 / opts.scan_step + 1e-9));
  for (const auto& t : s.tori) {
    for (const LoopKind kind : {LoopKind::Vertical, LoopKind::Horizontal}) {
      GeneratorLoop best;
      best.torus = t.index;
      best.kind = kind;
      best.clearance = -1.0;
      for (int k = 0; k < steps; ++k) {
        const double off = k * opts.scan_step;
        const double c = line_clearance(t, kind, off, 0.0);
        if (c > best.clearance) {
          best.offset = off;
          best.clearance = c;
        }
      }
      if (!(best.clearance > opts.min_clearance)) {
        std::ostringstream os;
        os << "no " << to_string(kind) << " loop on torus " << t.index << " clears the cutouts by "
           << opts.min_clearance << " (best " << best.clearance << ")";
        throw Error(ErrorCode::NoValidOffset, os.str());
      }
      const double drift = kind == LoopKind::Vertical ? t.slope.x : t.slope.y;
      best.sweep_clearance = line_clearance(t, kind, best.offset, drift);
      out.push_back(best);
    }
  }
  return out;
}

LoopPath path_of(const GeneratorLoop& loop) {
  LoopPath p;
  p.torus = loop.torus;
  const double off = loop.offset;
  const double sgn = loop.reversed ? -1.0 : 1.0;
  if (loop.kind == LoopKind::Vertical) {
    p.point = [off, r = loop.reversed](double s) { return Vec2{off, r ? 1.0 - s : s}; };
    p.tangent = [sgn](double) { return Vec2{0.0, sgn}; };
  } else {
    p.point = [off, r = loop.reversed](double s) { return Vec2{r ? s : 1.0 - s, off}; };
    p.tangent = [sgn](double) { return Vec2{-sgn, 0.0}; };
  }
  return p;
}

double swept_area(const GluedSurface& s, const LoopPath& loop, Quadrature q, const TimeFieldFn& field) {
  if (q.n_s < 1 || q.n_t < 1) throw Error(ErrorCode::PreconditionViolation, "quadrature needs at least one node");
  if (loop.torus < 0 || loop.torus >= s.genus()) {
    throw Error(ErrorCode::PreconditionViolation, "no torus " + std::to_string(loop.torus));
  }
  double total = 0.0;
  for (int j = 0; j < q.n_t; ++j) {
    const double t = (j + 0.5) / q.n_t;
    double row = 0.0;
    for (int k = 0; k < q.n_s; ++k) {
      const double sv = (k + 0.5) / q.n_s;
      const Vec2 x = loop.point(sv);
      const SurfacePoint p = torus_point(loop.torus, wrap01(x.x), wrap01(x.y));
      if (!contains(s, p)) {
        std::ostringstream os;
        os << "loop point (" << x.x << ", " << x.y << ") on torus " << loop.torus << " lies in a cutout";
        throw Error(ErrorCode::SweepHitsCutout, os.str());
      }
      const Vec2 v = field ? field(p, t) : vector_field(s, p);
      row += integrand(v, loop.tangent(sv));
    }
    total += row / q.n_s;
  }
  return total / q.n_t;
}

double swept_area(const GluedSurface& s, const GeneratorLoop& loop, Quadrature q, const TimeFieldFn& field) {
  return swept_area(s, path_of(loop), q, field);
}

FluxVector flux_vector(const GluedSurface& s, Quadrature q, const TimeFieldFn& field, double tol) {
  FluxVector f;
  for (const auto& loop : generator_loops(s)) {
    const double v = swept_area(s, loop, q, field);
    const auto& slope = s.tori[loop.torus].slope;
    const double expected = loop.kind == LoopKind::Vertical ? slope.x : slope.y;
    if (!(std::abs(v - expected) <= tol)) {
      std::ostringstream os;
      os.precision(12);
      os << to_string(loop.kind) << " loop on torus " << loop.torus << " sweeps " << v << ", configured "
         << expected;
      throw Error(ErrorCode::FluxMismatch, os.str());
    }
    f.entries.push_back(v);
    f.per_loop.push_back({loop, v});
  }
  return f;
}

std::vector<Convergent> convergents(double x, std::int64_t max_q) {
  std::vector<Convergent> out;
  if (!std::isfinite(x)) return out;
  std::int64_t p0 = 1, q0 = 0;
  double a = std::floor(x);
  std::int64_t p1 = static_cast<std::int64_t>(a), q1 = 1;
  double r = x - a;
  out.push_back({p1, q1});
  const double exact_tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  while (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) > exact_tol && r > 0.0) {
    const double inv = 1.0 / r;
    a = std::floor(inv);
    r = inv - a;
    if (a > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_q) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    out.push_back({p1, q1});
  }
  return out;
}

FluxConditionReport flux_condition_check(const std::vector<double>& flux, std::int64_t Q, double delta) {
  if (Q < 1) throw Error(ErrorCode::PreconditionViolation, "Q must be at least 1");
  if (!(delta > 0.0)) throw Error(ErrorCode::PreconditionViolation, "delta must be positive");
  if (flux.size() % 2 != 0) throw Error(ErrorCode::PreconditionViolation, "flux vector must have even length");

  FluxConditionReport rep;
  rep.Q = Q;
  rep.delta = delta;
  rep.holds = true;
  for (std::size_t i = 0; i < flux.size() / 2; ++i) {
    RatioCheck c;
    c.torus = static_cast<int>(i);
    c.u = flux[2 * i];
    c.v = flux[2 * i + 1];
    c.u_nonzero = c.u != 0.0;
    if (c.u_nonzero) {
      c.ratio = c.v / c.u;
      const auto cs = convergents(c.ratio, Q);
      for (const auto& k : cs) {
        const double qd = static_cast<double>(k.q);
        if (std::abs(c.ratio - static_cast<double>(k.p) / qd) < delta / (qd * qd)) {
          c.qualifying = k;
          break;
        }
      }
      const auto& last = cs.back();
      const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(c.ratio));
      if (std::abs(c.ratio - static_cast<double>(last.p) / static_cast<double>(last.q)) <= tol) c.exact_q = last.q;
      c.irrational_at_scale = !c.qualifying && !c.exact_q;
    }
    rep.holds = rep.holds && c.u_nonzero && c.irrational_at_scale;
    rep.per_genus.push_back(c);
  }
  return rep;
}

nlohmann::json to_json(const GeneratorLoop& l) {
  return {{"torus", l.torus},
          {"kind", to_string(l.kind)},
          {"offset", l.offset},
          {"reversed", l.reversed},
          {"min_cutout_distance", l.clearance},
          {"sweep_cutout_distance", l.sweep_clearance}};
}

nlohmann::json to_json(const FluxVector& f) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& l : f.per_loop) per.push_back({{"loop", to_json(l.loop)}, {"value", l.value}});
  return {{"flux", f.entries}, {"per_loop", per}};
}

nlohmann::json to_json(const FluxConditionReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : r.per_genus) {
    nlohmann::json j{{"torus", c.torus},         {"u", c.u},
                     {"v", c.v},                 {"u_nonzero", c.u_nonzero},
                     {"ratio", c.ratio},         {"irrational_at_scale", c.irrational_at_scale},
                     {"qualifying_q", nullptr},  {"qualifying_p", nullptr},
                     {"exact_q", nullptr}};
    if (c.qualifying) {
      j["qualifying_q"] = c.qualifying->q;
      j["qualifying_p"] = c.qualifying->p;
    }
    if (c.exact_q) j["exact_q"] = *c.exact_q;
    per.push_back(j);
  }
  return {{"Q", r.Q}, {"delta", r.delta}, {"holds", r.holds}, {"per_genus", per}};
}

} // namespace genusflow
