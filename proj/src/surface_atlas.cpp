#include "genusflow/surface_atlas.hpp"

#include "genusflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace genusflow {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap01(double x) noexcept {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double wrap_half(double x) noexcept { return x - std::round(x); }

double wrap_angle(double a) noexcept {
  double r = std::remainder(a, 2.0 * kPi);
  return r <= -kPi ? r + 2.0 * kPi : r;
}

double sign(double x) noexcept { return x < 0.0 ? -1.0 : 1.0; }

Vec2 read_vec(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::BadConfig, std::string(what) + " must be a pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double read_number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw Error(ErrorCode::BadConfig, std::string(key) + " must be a number");
  return j[key].get<double>();
}

struct Locus {
  int handle;
  HandleEnd end;
  const RotatedSquare* sq;
};

double handle_q_sign(HandleEnd e) noexcept { return e == HandleEnd::Left ? -1.0 : 1.0; }
double handle_y(HandleEnd e) noexcept { return e == HandleEnd::Left ? -1.0 : 1.0; }

class UnionFind {
public:
  int add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
  std::vector<int> parent_;
};

} // namespace

double Vec2::norm() const noexcept { return std::hypot(x, y); }

std::string to_string(ChartId id) {
  return (id.kind == ChartKind::Torus ? "torus:" : "handle:") + std::to_string(id.index);
}

Vec2 RotatedSquare::along() const noexcept { return {std::cos(angle), std::sin(angle)}; }
Vec2 RotatedSquare::across() const noexcept { return {-std::sin(angle), std::cos(angle)}; }

Vec2 RotatedSquare::to_local(Vec2 x) const noexcept {
  const Vec2 d{wrap_half(x.x - center.x), wrap_half(x.y - center.y)};
  return {d.dot(along()), d.dot(across())};
}

Vec2 RotatedSquare::from_local(Vec2 pq) const noexcept {
  return center + pq.x * along() + pq.y * across();
}

std::array<Vec2, 4> RotatedSquare::corners() const noexcept {
  const double h = 0.5 * side;
  return {from_local({-h, -h}), from_local({h, -h}), from_local({h, h}), from_local({-h, h})};
}

double RotatedSquare::half_extent() const noexcept {
  return 0.5 * side * (std::abs(std::cos(angle)) + std::abs(std::sin(angle)));
}

double RotatedSquare::distance(Vec2 x) const noexcept {
  const Vec2 d = x - center;
  const double h = 0.5 * side;
  const double dp = std::max(std::abs(d.dot(along())) - h, 0.0);
  const double dq = std::max(std::abs(d.dot(across())) - h, 0.0);
  return std::hypot(dp, dq);
}

Sector sector_of(double phi) noexcept {
  const double a = wrap_angle(phi);
  if (a > -kPi / 4 && a <= kPi / 4) return Sector::Right;
  if (a > kPi / 4 && a <= 3 * kPi / 4) return Sector::Top;
  if (a > -3 * kPi / 4 && a <= -kPi / 4) return Sector::Bottom;
  return Sector::Left;
}

std::pair<double, double> sector_bounds(Sector s, double phi) noexcept {
  double lo = 0.0;
  switch (s) {
  case Sector::Right: lo = -kPi / 4; break;
  case Sector::Top: lo = kPi / 4; break;
  case Sector::Left: lo = 3 * kPi / 4; break;
  case Sector::Bottom: lo = -3 * kPi / 4; break;
  }
  const double k = std::round((phi - lo - kPi / 4) / (2 * kPi));
  lo += 2 * kPi * k;
  return {lo, lo + kPi / 2};
}

double HandleChart::blend(double y) const noexcept {
  const double a = std::abs(y);
  if (a <= c) return 0.0;
  const double t = (a - c) / (1.0 - c);
  return std::exp(1.0 - 1.0 / t);
}

double HandleChart::blend_derivative(double y) const noexcept {
  const double a = std::abs(y);
  if (a <= c) return 0.0;
  const double t = (a - c) / (1.0 - c);
  return sign(y) * std::exp(1.0 - 1.0 / t) / (t * t * (1.0 - c));
}

double HandleChart::section_radius(double y, double phi) const noexcept {
  const double lam = blend(y);
  const double m = std::max(std::abs(std::cos(phi)), std::abs(std::sin(phi)));
  return (1.0 - lam) * eps / 4.0 + lam * (eps / 2.0) / m;
}

Vec2 HandleChart::section_point(double y, double phi) const noexcept {
  const double r = section_radius(y, phi);
  return {r * std::cos(phi), r * std::sin(phi)};
}

SectionJet HandleChart::section_jet(double y, double phi, Sector s) const noexcept {
  const double cs = std::cos(phi), sn = std::sin(phi);
  double m = 0.0, dm = 0.0;
  switch (s) {
  case Sector::Right: m = cs; dm = -sn; break;
  case Sector::Top: m = sn; dm = cs; break;
  case Sector::Left: m = -cs; dm = sn; break;
  case Sector::Bottom: m = -sn; dm = -cs; break;
  }
  const double lam = blend(y), dlam = blend_derivative(y);
  const double rho = (1.0 - lam) * eps / 4.0 + lam * (eps / 2.0) / m;
  const double rho_phi = -lam * (eps / 2.0) * dm / (m * m);
  const double rho_y = dlam * ((eps / 2.0) / m - eps / 4.0);
  return {rho * sn, rho_y * sn, rho_phi * sn + rho * cs};
}

std::vector<Vec2> default_slopes(int genus) {
  const std::vector<double> ratios = {std::numbers::phi, std::numbers::sqrt2, std::numbers::sqrt3,
                                      std::sqrt(5.0), std::numbers::e};
  std::vector<Vec2> out;
  for (int i = 0; i < genus; ++i) {
    if (i < static_cast<int>(ratios.size())) {
      out.push_back({1.0, ratios[i]});
    } else {
      // sqrt of the next non-squares: 7, 8, 10, 11, ...
      int n = 6;
      for (int k = static_cast<int>(ratios.size()); k <= i;) {
        ++n;
        const int r = static_cast<int>(std::lround(std::sqrt(n)));
        if (r * r != n) ++k;
      }
      out.push_back({1.0, std::sqrt(static_cast<double>(n))});
    }
  }
  return out;
}

SurfaceConfig SurfaceConfig::defaults(int genus) {
  SurfaceConfig c;
  c.genus = genus;
  c.slopes = default_slopes(genus);
  return c;
}

SurfaceConfig SurfaceConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadConfig, "surface config must be an object");
  SurfaceConfig c;
  if (j.contains("genus")) {
    if (!j["genus"].is_number_integer()) throw Error(ErrorCode::BadConfig, "genus must be an integer");
    c.genus = j["genus"].get<int>();
  }
  if (j.contains("slopes")) {
    if (!j["slopes"].is_array()) throw Error(ErrorCode::BadConfig, "slopes must be an array");
    for (const auto& s : j["slopes"]) c.slopes.push_back(read_vec(s, "slope"));
  } else {
    c.slopes = default_slopes(c.genus);
  }
  c.epsilon = read_number(j, "epsilon", c.epsilon);
  c.c = read_number(j, "c", c.c);
  c.d = read_number(j, "d", c.d);
  if (j.contains("cutout_centers")) {
    const auto& cc = j["cutout_centers"];
    if (!cc.is_array() || cc.size() != 2) {
      throw Error(ErrorCode::BadConfig, "cutout_centers must hold two points");
    }
    c.cutout_centers = std::make_pair(read_vec(cc[0], "cutout center"), read_vec(cc[1], "cutout center"));
  }
  return c;
}

void SurfaceConfig::set_genus(int g) {
  const auto defaults = default_slopes(std::max(g, 0));
  const std::size_t kept = std::min(slopes.size(), defaults.size());
  slopes.resize(defaults.size());
  for (std::size_t i = kept; i < defaults.size(); ++i) slopes[i] = defaults[i];
  genus = g;
}

const RotatedSquare& GluedSurface::square(int torus, CutoutSide side) const {
  const auto& t = tori.at(torus);
  const auto& sq = side == CutoutSide::Right ? t.right : t.left;
  if (!sq) throw Error(ErrorCode::TopologyMismatch, "torus " + std::to_string(torus) + " has no such cutout");
  return *sq;
}

GluedSurface build_surface(const SurfaceConfig& config) {
  const int g = config.genus;
  if (g < 2) throw Error(ErrorCode::BadConfig, "genus must be at least 2");
  if (static_cast<int>(config.slopes.size()) != g) {
    throw Error(ErrorCode::BadConfig, "expected " + std::to_string(g) + " slopes, got " +
                                          std::to_string(config.slopes.size()));
  }
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
    throw Error(ErrorCode::BadConfig, "epsilon must be positive");
  }
  if (!(config.d > 0.0 && config.d < 1.0 && config.c > 0.0 && config.c < 1.0 - config.d)) {
    throw Error(ErrorCode::BadConfig, "need 0 < d < 1 and 0 < c < 1 - d");
  }

  const Vec2 r_center = config.cutout_centers ? config.cutout_centers->first : Vec2{0.25, 0.25};
  const Vec2 l_center = config.cutout_centers ? config.cutout_centers->second : Vec2{0.75, 0.75};

  GluedSurface s;
  s.config = config;
  for (int i = 0; i < g; ++i) {
    const Vec2 slope = config.slopes[i];
    if (slope.x == 0.0 || !std::isfinite(slope.x) || !std::isfinite(slope.y)) {
      std::ostringstream os;
      os << "torus " << i << ": u must be a nonzero finite number (slope " << slope.x << ", " << slope.y << ")";
      throw Error(ErrorCode::BadSlope, os.str());
    }
    TorusChart t;
    t.index = i;
    t.slope = slope;
    const double angle = std::atan2(slope.y, slope.x);
    if (i + 1 < g) t.right = RotatedSquare{r_center, angle, config.epsilon};
    if (i > 0) t.left = RotatedSquare{l_center, angle, config.epsilon};

    for (const auto* sq : {&t.right, &t.left}) {
      if (!*sq) continue;
      const double h = (*sq)->half_extent();
      const Vec2 c = (*sq)->center;
      if (!(c.x - h > 0.0 && c.x + h < 1.0 && c.y - h > 0.0 && c.y + h < 1.0)) {
        throw Error(ErrorCode::EpsilonTooLarge,
                    "cutout on torus " + std::to_string(i) + " leaves the fundamental domain");
      }
    }
    if (t.right && t.left) {
      const Vec2 d = t.left->center - t.right->center;
      const bool apart = std::abs(d.dot(t.right->along())) > config.epsilon ||
                         std::abs(d.dot(t.right->across())) > config.epsilon;
      if (!apart) throw Error(ErrorCode::EpsilonTooLarge, "cutouts on torus " + std::to_string(i) + " overlap");
    }
    s.tori.push_back(t);
  }
  for (int i = 0; i + 1 < g; ++i) {
    HandleChart h;
    h.index = i;
    h.eps = config.epsilon;
    h.c = config.c;
    h.d = config.d;
    h.speed_left = s.tori[i].speed();
    h.speed_right = s.tori[i + 1].speed();
    s.handles.push_back(h);
    s.gluings.push_back({i, HandleEnd::Left, i, CutoutSide::Right});
    s.gluings.push_back({i, HandleEnd::Right, i + 1, CutoutSide::Left});
  }
  return s;
}

TransitionResult transition(const GluedSurface& s, const SurfacePoint& p, Vec2 tangent, double tol) {
  if (p.chart.kind == ChartKind::Torus) {
    if (p.chart.index < 0 || p.chart.index >= s.genus()) {
      throw Error(ErrorCode::NotOnBoundary, "no such torus");
    }
    const auto& t = s.tori[p.chart.index];
    std::vector<Locus> candidates;
    if (t.right) candidates.push_back({t.index, HandleEnd::Left, &*t.right});
    if (t.left) candidates.push_back({t.index - 1, HandleEnd::Right, &*t.left});
    for (const auto& c : candidates) {
      const double h = 0.5 * c.sq->side;
      Vec2 pq = c.sq->to_local(p.coords);
      const bool on_p = std::abs(std::abs(pq.x) - h) <= tol && std::abs(pq.y) <= h + tol;
      const bool on_q = std::abs(std::abs(pq.y) - h) <= tol && std::abs(pq.x) <= h + tol;
      if (!on_p && !on_q) continue;
      const bool p_side = std::abs(pq.x) >= std::abs(pq.y);
      if (p_side) {
        pq.x = sign(pq.x) * h;
        pq.y = std::clamp(pq.y, -h, h);
      } else {
        pq.y = sign(pq.y) * h;
        pq.x = std::clamp(pq.x, -h, h);
      }
      const double qs = handle_q_sign(c.end);
      const double x = pq.x, z = qs * pq.y;
      const double phi = std::atan2(z, x);

      const double tp = tangent.dot(c.sq->along()), tq = tangent.dot(c.sq->across());
      double w, dx = 0.0, dz = 0.0;
      if (p_side) {
        w = -sign(pq.x) * tp;
        dz = qs * tq;
      } else {
        w = -sign(pq.y) * tq;
        dx = tp;
      }
      const double r2 = x * x + z * z;
      const Vec2 out_tangent{c.end == HandleEnd::Left ? w : -w, (x * dz - z * dx) / r2};
      return {handle_point(c.handle, handle_y(c.end), phi), out_tangent};
    }
    std::ostringstream os;
    os << "torus point (" << p.coords.x << ", " << p.coords.y << ") is not on a glued square";
    throw Error(ErrorCode::NotOnBoundary, os.str());
  }

  if (p.chart.index < 0 || p.chart.index >= static_cast<int>(s.handles.size())) {
    throw Error(ErrorCode::NotOnBoundary, "no such handle");
  }
  const double y = p.coords.x, phi = p.coords.y;
  if (std::abs(std::abs(y) - 1.0) > tol) {
    throw Error(ErrorCode::NotOnBoundary, "handle point with y = " + std::to_string(y) + " is not on an end");
  }
  const int i = p.chart.index;
  const HandleEnd end = y < 0.0 ? HandleEnd::Left : HandleEnd::Right;
  const int torus = end == HandleEnd::Left ? i : i + 1;
  const RotatedSquare& sq = s.square(torus, end == HandleEnd::Left ? CutoutSide::Right : CutoutSide::Left);
  const double h = 0.5 * sq.side;
  const double m = std::max(std::abs(std::cos(phi)), std::abs(std::sin(phi)));
  double x = h * std::cos(phi) / m, z = h * std::sin(phi) / m;
  const bool x_face = std::abs(x) >= std::abs(z);
  if (x_face) {
    x = sign(x) * h;
  } else {
    z = sign(z) * h;
  }
  const double qs = handle_q_sign(end);
  const Vec2 pq{x, qs * z};

  const double w = end == HandleEnd::Left ? tangent.x : -tangent.x;
  const double r2 = x * x + z * z;
  double tp, tq;
  if (x_face) {
    const double dz = tangent.y * r2 / x;
    tp = -sign(pq.x) * w;
    tq = qs * dz;
  } else {
    const double dx = -tangent.y * r2 / z;
    tq = -sign(pq.y) * w;
    tp = dx;
  }
  const Vec2 pos = sq.from_local(pq);
  const Vec2 out_tangent = tp * sq.along() + tq * sq.across();
  return {torus_point(torus, wrap01(pos.x), wrap01(pos.y)), out_tangent};
}

bool contains(const GluedSurface& s, const SurfacePoint& p) {
  if (!std::isfinite(p.coords.x) || !std::isfinite(p.coords.y)) return false;
  if (p.chart.kind == ChartKind::Handle) {
    if (p.chart.index < 0 || p.chart.index >= static_cast<int>(s.handles.size())) return false;
    return std::abs(p.coords.x) <= 1.0;
  }
  if (p.chart.index < 0 || p.chart.index >= s.genus()) return false;
  const auto& t = s.tori[p.chart.index];
  for (const auto* sq : {&t.right, &t.left}) {
    if (!*sq) continue;
    const Vec2 pq = (*sq)->to_local(p.coords);
    const double h = 0.5 * (*sq)->side - kTolBoundary;
    if (std::abs(pq.x) < h && std::abs(pq.y) < h) return false;
  }
  return true;
}

TopologyReport validate_topology(const GluedSurface& s) {
  constexpr int n = 4;
  UnionFind uf;
  std::vector<std::array<int, 3>> triangles;
  auto add_quad = [&](int a, int b, int c, int d) {
    triangles.push_back({a, b, c});
    triangles.push_back({a, c, d});
  };

  // Torus grids; the hole cells stand for R (cell (0,0)) and L (cell (2,2)).
  std::vector<std::map<CutoutSide, std::array<int, 4>>> holes(s.tori.size());
  for (const auto& t : s.tori) {
    std::vector<int> v(n * n);
    for (auto& id : v) id = uf.add();
    auto at = [&](int j, int k) { return v[((j % n) * n) + (k % n)]; };
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const std::array<int, 4> cell{at(j, k), at(j + 1, k), at(j + 1, k + 1), at(j, k + 1)};
        if (t.right && j == 0 && k == 0) {
          holes[t.index][CutoutSide::Right] = cell;
        } else if (t.left && j == 2 && k == 2) {
          holes[t.index][CutoutSide::Left] = cell;
        } else {
          add_quad(cell[0], cell[1], cell[2], cell[3]);
        }
      }
    }
  }

  std::vector<std::map<HandleEnd, std::array<int, 4>>> ends(s.handles.size());
  for (const auto& h : s.handles) {
    std::array<int, 4> a{}, b{};
    for (auto& id : a) id = uf.add();
    for (auto& id : b) id = uf.add();
    for (int m = 0; m < n; ++m) add_quad(a[m], a[(m + 1) % n], b[(m + 1) % n], b[m]);
    ends[h.index][HandleEnd::Left] = a;
    ends[h.index][HandleEnd::Right] = b;
  }

  std::map<std::pair<int, int>, int> end_uses;
  std::map<std::pair<int, int>, int> hole_uses;
  for (const auto& gl : s.gluings) {
    if (gl.handle < 0 || gl.handle >= static_cast<int>(s.handles.size()) || gl.torus < 0 ||
        gl.torus >= s.genus() || !holes[gl.torus].contains(gl.cutout)) {
      throw Error(ErrorCode::TopologyMismatch, "gluing refers to a missing chart or cutout");
    }
    ++end_uses[{gl.handle, static_cast<int>(gl.end)}];
    ++hole_uses[{gl.torus, static_cast<int>(gl.cutout)}];
    const auto& e = ends[gl.handle][gl.end];
    const auto& c = holes[gl.torus][gl.cutout];
    for (int m = 0; m < n; ++m) uf.unite(e[m], c[(n - m) % n]);
  }
  for (const auto& h : s.handles) {
    for (HandleEnd e : {HandleEnd::Left, HandleEnd::Right}) {
      const int uses = end_uses[{h.index, static_cast<int>(e)}];
      if (uses != 1) {
        throw Error(ErrorCode::TopologyMismatch,
                    "handle " + std::to_string(h.index) + (e == HandleEnd::Left ? " left" : " right") +
                        " end glued " + std::to_string(uses) + " times");
      }
    }
  }
  for (const auto& [key, uses] : hole_uses) {
    if (uses != 1) {
      throw Error(ErrorCode::TopologyMismatch, "cutout on torus " + std::to_string(key.first) + " glued " +
                                                   std::to_string(uses) + " times");
    }
  }

  std::set<int> vertices;
  std::map<std::pair<int, int>, int> edge_faces;
  std::set<std::array<int, 3>> faces;
  for (auto tri : triangles) {
    for (auto& v : tri) v = uf.find(v);
    for (int m = 0; m < 3; ++m) {
      vertices.insert(tri[m]);
      const int a = tri[m], b = tri[(m + 1) % 3];
      ++edge_faces[{std::min(a, b), std::max(a, b)}];
    }
    std::sort(tri.begin(), tri.end());
    faces.insert(tri);
  }
  if (faces.size() != triangles.size()) {
    throw Error(ErrorCode::TopologyMismatch, "gluing collapsed two triangles together");
  }
  long open_edges = 0;
  for (const auto& [edge, count] : edge_faces) {
    if (count != 2) ++open_edges;
  }
  TopologyReport r;
  r.vertices = static_cast<long>(vertices.size());
  r.edges = static_cast<long>(edge_faces.size());
  r.faces = static_cast<long>(faces.size());
  r.euler = r.vertices - r.edges + r.faces;
  r.expected = 2 - 2L * s.genus();
  if (open_edges > 0) {
    throw Error(ErrorCode::TopologyMismatch,
                std::to_string(open_edges) + " edges do not bound exactly two triangles");
  }
  if (r.euler != r.expected) {
    throw Error(ErrorCode::TopologyMismatch, "Euler characteristic " + std::to_string(r.euler) +
                                                 ", expected " + std::to_string(r.expected));
  }
  return r;
}

namespace {

nlohmann::json vec_json(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }

nlohmann::json square_json(const RotatedSquare& sq) {
  nlohmann::json corners = nlohmann::json::array();
  for (const auto& c : sq.corners()) corners.push_back(vec_json(c));
  return {{"center", vec_json(sq.center)}, {"angle", sq.angle}, {"side", sq.side}, {"corners", corners}};
}

} // namespace

nlohmann::json to_json(const GluedSurface& s) {
  nlohmann::json tori = nlohmann::json::array();
  for (const auto& t : s.tori) {
    nlohmann::json jt = {{"index", t.index}, {"slope", vec_json(t.slope)}};
    jt["R"] = t.right ? square_json(*t.right) : nlohmann::json(nullptr);
    jt["L"] = t.left ? square_json(*t.left) : nlohmann::json(nullptr);
    tori.push_back(jt);
  }
  nlohmann::json handles = nlohmann::json::array();
  for (const auto& h : s.handles) {
    handles.push_back({{"index", h.index}, {"eps", h.eps}, {"c", h.c}, {"d", h.d},
                       {"speed_left", h.speed_left}, {"speed_right", h.speed_right}});
  }
  nlohmann::json gluings = nlohmann::json::array();
  for (const auto& gl : s.gluings) {
    gluings.push_back({{"handle", gl.handle},
                       {"end", gl.end == HandleEnd::Left ? "y=-1" : "y=+1"},
                       {"torus", gl.torus},
                       {"cutout", gl.cutout == CutoutSide::Right ? "R" : "L"}});
  }
  return {{"genus", s.genus()}, {"epsilon", s.config.epsilon}, {"c", s.config.c}, {"d", s.config.d},
          {"tori", tori}, {"handles", handles}, {"gluings", gluings}};
}

nlohmann::json to_json(const TopologyReport& r) {
  return {{"vertices", r.vertices}, {"edges", r.edges}, {"faces", r.faces},
          {"euler_characteristic", r.euler}, {"expected", r.expected}};
}

nlohmann::json to_json(const SurfacePoint& p) {
  return {{"chart", to_string(p.chart)}, {"coords", vec_json(p.coords)}};
}

double chart_distance(const SurfacePoint& a, const SurfacePoint& b) noexcept {
  if (!(a.chart == b.chart)) return std::numeric_limits<double>::infinity();
  if (a.chart.kind == ChartKind::Torus) {
    return std::hypot(wrap_half(a.coords.x - b.coords.x), wrap_half(a.coords.y - b.coords.y));
  }
  return std::hypot(a.coords.x - b.coords.x, wrap_angle(a.coords.y - b.coords.y));
}

SurfacePoint canonical(const SurfacePoint& p) noexcept {
  if (p.chart.kind == ChartKind::Torus) return torus_point(p.chart.index, wrap01(p.coords.x), wrap01(p.coords.y));
  return handle_point(p.chart.index, p.coords.x, wrap_angle(p.coords.y));
}

} // namespace genusflow
