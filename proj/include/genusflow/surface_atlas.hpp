#pragma once

// Chart atlas of the glued genus-g surface: g flat tori with square cutouts,
// and g-1 handles (cylinders whose ends are squares) glued along the cutouts.

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace genusflow {

struct Vec2 {
  double x = 0.0, y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
  double dot(Vec2 o) const noexcept { return x * o.x + y * o.y; }
  double norm() const noexcept;
};

enum class ChartKind { Torus, Handle };

/// Charts are indexed from 0: tori 0..g-1, handles 0..g-2.
struct ChartId {
  ChartKind kind = ChartKind::Torus;
  int index = 0;
  friend bool operator==(const ChartId&, const ChartId&) = default;
};

std::string to_string(ChartId id);

/// Torus coordinates (x, y) mod 1, or handle coordinates (y, phi).
struct SurfacePoint {
  ChartId chart;
  Vec2 coords;
};

inline SurfacePoint torus_point(int i, double x, double y) { return {{ChartKind::Torus, i}, {x, y}}; }
inline SurfacePoint handle_point(int i, double y, double phi) { return {{ChartKind::Handle, i}, {y, phi}}; }

/// Square of side `side` whose sides p = +-side/2 are transverse to the flow
/// and q = +-side/2 are flow lines. Local coordinates: C + p e + q n.
struct RotatedSquare {
  Vec2 center;
  double angle = 0.0;
  double side = 0.0;

  Vec2 along() const noexcept;  // e
  Vec2 across() const noexcept; // n = e rotated by +pi/2
  /// Local (p, q) of a torus point, using the periodic image nearest the center.
  Vec2 to_local(Vec2 x) const noexcept;
  Vec2 from_local(Vec2 pq) const noexcept;
  std::array<Vec2, 4> corners() const noexcept;
  /// Half-width of the axis-aligned bounding box.
  double half_extent() const noexcept;
  /// Euclidean distance from an (unwrapped) point to the closed square.
  double distance(Vec2 x) const noexcept;
};

struct TorusChart {
  int index = 0;
  Vec2 slope;
  std::optional<RotatedSquare> right; // R_i, glued to handle i (absent on the last torus)
  std::optional<RotatedSquare> left;  // L_i, glued to handle i-1 (absent on the first torus)

  double speed() const noexcept { return slope.norm(); }
};

/// Cross-section sectors of the handle, by which of |cos phi|, |sin phi| is larger.
enum class Sector { Right, Top, Left, Bottom };

Sector sector_of(double phi) noexcept;
/// Angles bounding a sector, lo < hi, with phi in (lo, hi] after unwrapping.
std::pair<double, double> sector_bounds(Sector s, double phi) noexcept;

struct SectionJet {
  double z, z_y, z_phi;
};

/// Cylinder [-1, 1] x S^1. The end y = -1 is glued to R_i on torus i and
/// the end y = +1 to L_{i+1} on torus i+1.
struct HandleChart {
  int index = 0;
  double eps = 0.0, c = 0.0, d = 0.0;
  double speed_left = 1.0;  // |(u_i, v_i)|
  double speed_right = 1.0; // |(u_{i+1}, v_{i+1})|

  /// Circle-to-square blend lambda(y): 0 for |y| <= c, 1 at |y| = 1.
  double blend(double y) const noexcept;
  double blend_derivative(double y) const noexcept;
  double section_radius(double y, double phi) const noexcept;
  /// Embedded (x, z) of a point.
  Vec2 section_point(double y, double phi) const noexcept;
  /// z and its partial derivatives, using the formula of sector `s`.
  SectionJet section_jet(double y, double phi, Sector s) const noexcept;
  /// Constant density of the area form kappa dy ^ dphi.
  double area_density() const noexcept { return eps / 4.0; }
};

enum class HandleEnd { Left, Right };
enum class CutoutSide { Right, Left };

struct Gluing {
  int handle = 0;
  HandleEnd end = HandleEnd::Left;
  int torus = 0;
  CutoutSide cutout = CutoutSide::Right;
};

struct SurfaceConfig {
  int genus = 2;
  std::vector<Vec2> slopes;
  double epsilon = 0.05;
  double c = 0.4;
  double d = 0.4;
  std::optional<std::pair<Vec2, Vec2>> cutout_centers; // (R center, L center)

  static SurfaceConfig defaults(int genus);
  static SurfaceConfig from_json(const nlohmann::json& j);
  /// Changes the genus, keeping configured slopes where available.
  void set_genus(int g);
};

/// (1, golden ratio), (1, sqrt 2), (1, sqrt 3), (1, sqrt 5), (1, e), (1, sqrt 7), ...
std::vector<Vec2> default_slopes(int genus);

struct GluedSurface {
  SurfaceConfig config;
  std::vector<TorusChart> tori;
  std::vector<HandleChart> handles;
  std::vector<Gluing> gluings;

  int genus() const noexcept { return static_cast<int>(tori.size()); }
  const RotatedSquare& square(int torus, CutoutSide side) const;
};

GluedSurface build_surface(const SurfaceConfig& config);

struct TransitionResult {
  SurfacePoint point;
  Vec2 tangent;
};

inline constexpr double kTolBoundary = 1e-10;

/// Moves a point on a glued boundary (and a tangent vector there) to the
/// adjacent chart. Throws NotOnBoundary.
TransitionResult transition(const GluedSurface& s, const SurfacePoint& p, Vec2 tangent,
                            double tol_boundary = kTolBoundary);

bool contains(const GluedSurface& s, const SurfacePoint& p);

struct TopologyReport {
  long vertices = 0, edges = 0, faces = 0;
  long euler = 0;
  long expected = 0;
};

/// Euler characteristic of a triangulated model of the glued complex.
/// Throws TopologyMismatch.
TopologyReport validate_topology(const GluedSurface& s);

nlohmann::json to_json(const GluedSurface& s);
nlohmann::json to_json(const TopologyReport& r);
nlohmann::json to_json(const SurfacePoint& p);

/// Chart-metric distance: periodic on tori, phi periodic on handles,
/// infinite across charts.
double chart_distance(const SurfacePoint& a, const SurfacePoint& b) noexcept;
/// Wraps torus coordinates to [0, 1) and phi to (-pi, pi].
SurfacePoint canonical(const SurfacePoint& p) noexcept;

} // namespace genusflow
