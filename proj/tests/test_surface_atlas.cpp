#include "genusflow/error.hpp"
#include "genusflow/surface_atlas.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace genusflow;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected genusflow::Error");
  return ErrorCode::BadConfig;
}

GluedSurface surface(int g, double eps = 0.05) {
  auto c = SurfaceConfig::defaults(g);
  c.epsilon = eps;
  return build_surface(c);
}

double wrapped_gap(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x - std::round(a.x - b.x), a.y - b.y - std::round(a.y - b.y));
}

} // namespace

TEST_CASE("build counts charts and gluings") {
  const auto s2 = surface(2);
  CHECK(s2.tori.size() == 2);
  CHECK(s2.handles.size() == 1);
  CHECK(s2.gluings.size() == 2);
  CHECK(s2.tori[0].slope.y == doctest::Approx(std::numbers::phi).epsilon(1e-15));
  CHECK(s2.tori[1].slope.y == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  CHECK_FALSE(s2.tori[0].left);
  CHECK(s2.tori[0].right);
  CHECK(s2.tori[1].left);
  CHECK_FALSE(s2.tori[1].right);

  const auto s5 = surface(5);
  CHECK(s5.tori.size() == 5);
  CHECK(s5.handles.size() == 4);
  CHECK(s5.gluings.size() == 8);
  CHECK(validate_topology(s5).euler == -8);
}

TEST_CASE("cutouts are flow aligned and inside the domain") {
  const auto s = surface(3);
  for (const auto& t : s.tori) {
    for (const auto* sq : {&t.right, &t.left}) {
      if (!*sq) continue;
      const Vec2 e = (*sq)->along();
      CHECK(std::abs(e.x * t.slope.y - e.y * t.slope.x) < 1e-14);
      CHECK(e.dot(t.slope) > 0.0);
      for (const auto& c : (*sq)->corners()) {
        CHECK(c.x > 0.0);
        CHECK(c.x < 1.0);
        CHECK(c.y > 0.0);
        CHECK(c.y < 1.0);
      }
    }
  }
}

TEST_CASE("build rejects bad inputs") {
  CHECK(code_of([] { surface(2, 0.9); }) == ErrorCode::EpsilonTooLarge);
  auto c = SurfaceConfig::defaults(2);
  c.slopes[1] = {0.0, 1.0};
  CHECK(code_of([&] { build_surface(c); }) == ErrorCode::BadSlope);
  c = SurfaceConfig::defaults(2);
  c.genus = 1;
  CHECK(code_of([&] { build_surface(c); }) == ErrorCode::BadConfig);
  c = SurfaceConfig::defaults(2);
  c.c = 0.7;
  CHECK(code_of([&] { build_surface(c); }) == ErrorCode::BadConfig);
  c = SurfaceConfig::defaults(3);
  c.epsilon = 0.2;
  c.cutout_centers = std::make_pair(Vec2{0.4, 0.4}, Vec2{0.5, 0.5});
  CHECK(code_of([&] { build_surface(c); }) == ErrorCode::EpsilonTooLarge);
}

TEST_CASE("config from json") {
  const auto j = nlohmann::json::parse(R"({"genus": 3, "slopes": [[1, 2], [1, 3], [2, 5]],
                                          "epsilon": 0.04, "cutout_centers": [[0.3, 0.3], [0.7, 0.6]]})");
  const auto c = SurfaceConfig::from_json(j);
  CHECK(c.genus == 3);
  CHECK(c.slopes[2] == Vec2{2.0, 5.0});
  CHECK(c.epsilon == 0.04);
  CHECK(c.c == 0.4);
  CHECK(c.cutout_centers->second == Vec2{0.7, 0.6});
  const auto s = build_surface(c);
  CHECK(s.square(1, CutoutSide::Left).center == Vec2{0.7, 0.6});

  CHECK(code_of([] { SurfaceConfig::from_json(nlohmann::json::parse(R"({"slopes": 3})")); }) ==
        ErrorCode::BadConfig);
  const auto d = SurfaceConfig::from_json(nlohmann::json::parse(R"({"genus": 4})"));
  CHECK(d.slopes.size() == 4);
  CHECK(d.slopes[3].y == doctest::Approx(std::sqrt(5.0)));

  auto e = SurfaceConfig::defaults(2);
  e.slopes[0] = {1.0, 1.0};
  e.set_genus(6);
  CHECK(e.slopes.size() == 6);
  CHECK(e.slopes[0] == Vec2{1.0, 1.0});
  CHECK(e.slopes[5].y == doctest::Approx(std::sqrt(7.0)));
}

TEST_CASE("contains") {
  const auto s = surface(2);
  CHECK_FALSE(contains(s, torus_point(0, 0.25, 0.25)));
  CHECK(contains(s, torus_point(0, 0.6, 0.1)));
  CHECK(contains(s, torus_point(0, 0.75, 0.75)));
  CHECK_FALSE(contains(s, torus_point(1, 0.75, 0.75)));
  CHECK(contains(s, handle_point(0, 0.0, 0.0)));
  CHECK_FALSE(contains(s, handle_point(0, 1.5, 0.0)));
  CHECK_FALSE(contains(s, handle_point(1, 0.0, 0.0)));
  // Boundary belongs to the torus.
  const auto& sq = s.square(0, CutoutSide::Right);
  const Vec2 side = sq.from_local({-0.025, 0.01});
  CHECK(contains(s, torus_point(0, side.x, side.y)));
}

TEST_CASE("handle cross-section") {
  const auto s = surface(2);
  const auto& h = s.handles[0];
  for (double phi = -kPi; phi < kPi; phi += 0.1) {
    CHECK(h.section_radius(0.3, phi) == doctest::Approx(0.05 / 4.0).epsilon(1e-15));
    for (double y : {-1.0, 1.0}) {
      const Vec2 xz = h.section_point(y, phi);
      CHECK(std::max(std::abs(xz.x), std::abs(xz.y)) == doctest::Approx(0.025).epsilon(1e-13));
    }
  }
  CHECK(h.blend(0.4) == 0.0);
  CHECK(h.blend(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h.blend(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  double prev = 0.0;
  for (double y = 0.41; y <= 1.0; y += 0.01) {
    CHECK(h.blend(y) > prev);
    prev = h.blend(y);
  }
  // Continuous in phi across the sector diagonals.
  for (double y : {0.5, 0.8, 1.0}) {
    for (double diag : {kPi / 4, 3 * kPi / 4, -kPi / 4, -3 * kPi / 4}) {
      CHECK(std::abs(h.section_radius(y, diag + 1e-9) - h.section_radius(y, diag - 1e-9)) < 1e-9);
    }
  }
}

TEST_CASE("section jet matches finite differences") {
  const auto s = surface(2);
  const auto& h = s.handles[0];
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uy(-0.99, 0.99), uphi(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const double y = uy(rng), phi = uphi(rng);
    const Sector sec = sector_of(phi);
    const auto [lo, hi] = sector_bounds(sec, phi);
    CHECK(phi > lo);
    CHECK(phi <= hi);
    if (phi - lo < 1e-4 || hi - phi < 1e-4) continue;
    const auto jet = h.section_jet(y, phi, sec);
    const double z = h.section_point(y, phi).y;
    CHECK(std::abs(jet.z - z) < 1e-15);
    const double k = 1e-6;
    const double zy = (h.section_point(y + k, phi).y - h.section_point(y - k, phi).y) / (2 * k);
    const double zphi = (h.section_point(y, phi + k).y - h.section_point(y, phi - k).y) / (2 * k);
    CHECK(std::abs(jet.z_y - zy) < 1e-8);
    CHECK(std::abs(jet.z_phi - zphi) < 1e-8);
  }
}

TEST_CASE("transition sends sides to sides") {
  const auto s = surface(2);
  const auto& sq = s.square(0, CutoutSide::Right);
  const double h = 0.025;

  // Midpoint of the flow-aligned side q = +eps/2 lands on z = -eps/2 at y = -1.
  const Vec2 mid = sq.from_local({0.0, h});
  const auto r = transition(s, torus_point(0, mid.x, mid.y), {0.0, 0.0});
  CHECK(r.point.chart == ChartId{ChartKind::Handle, 0});
  CHECK(r.point.coords.x == -1.0);
  const Vec2 xz = s.handles[0].section_point(-1.0, r.point.coords.y);
  CHECK(std::abs(xz.y + h) < 1e-15);
  CHECK(std::abs(xz.x) < 1e-15);

  // L_2 side q = +eps/2 lands on z = +eps/2 at y = +1.
  const auto& sl = s.square(1, CutoutSide::Left);
  const Vec2 mid2 = sl.from_local({0.01, h});
  const auto r2 = transition(s, torus_point(1, mid2.x, mid2.y), {0.0, 0.0});
  CHECK(r2.point.coords.x == 1.0);
  const Vec2 xz2 = s.handles[0].section_point(1.0, r2.point.coords.y);
  CHECK(std::abs(xz2.y - h) < 1e-15);
  CHECK(std::abs(xz2.x - 0.01) < 1e-15);

  // Every sampled point of a flow-aligned side lands on z = +-eps/2.
  for (int k = 0; k <= 50; ++k) {
    const double p = -h + 2 * h * k / 50.0;
    for (double q : {-h, h}) {
      const Vec2 x = sq.from_local({p, q});
      const auto rr = transition(s, torus_point(0, x.x, x.y), {0.0, 0.0});
      CHECK(std::abs(std::abs(s.handles[0].section_point(-1.0, rr.point.coords.y).y) - h) < 1e-14);
    }
  }

  // Corners go to corners.
  for (const auto& c : sq.corners()) {
    const auto rc = transition(s, torus_point(0, c.x, c.y), {0.0, 0.0});
    const Vec2 cxz = s.handles[0].section_point(-1.0, rc.point.coords.y);
    CHECK(std::abs(std::abs(cxz.x) - h) < 1e-14);
    CHECK(std::abs(std::abs(cxz.y) - h) < 1e-14);
  }
}

TEST_CASE("transition preserves length along sides") {
  const auto s = surface(2);
  const auto& sq = s.square(0, CutoutSide::Right);
  const double h = 0.025;
  for (double q0 : {-0.02, -0.005, 0.013}) {
    const Vec2 a = sq.from_local({-h, q0}), b = sq.from_local({-h, q0 + 0.007});
    const auto ra = transition(s, torus_point(0, a.x, a.y), {0.0, 0.0});
    const auto rb = transition(s, torus_point(0, b.x, b.y), {0.0, 0.0});
    const Vec2 xa = s.handles[0].section_point(-1.0, ra.point.coords.y);
    const Vec2 xb = s.handles[0].section_point(-1.0, rb.point.coords.y);
    CHECK(std::abs((xa - xb).norm() - 0.007) < 1e-12);
  }
}

TEST_CASE("transition round trip on random boundary points") {
  const auto s = surface(3);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> side(0, 3), which(0, 3);
  for (int i = 0; i < 100; ++i) {
    const double h = 0.025;
    const int w = which(rng);
    const int torus = w < 2 ? w : w - 1;
    const CutoutSide cs = w < 2 ? CutoutSide::Right : CutoutSide::Left;
    const auto& sq = s.square(torus, cs);
    const double t = h * u(rng);
    Vec2 pq;
    switch (side(rng)) {
    case 0: pq = {-h, t}; break;
    case 1: pq = {h, t}; break;
    case 2: pq = {t, -h}; break;
    default: pq = {t, h}; break;
    }
    const Vec2 x = sq.from_local(pq);
    const SurfacePoint p = torus_point(torus, x.x - std::floor(x.x), x.y - std::floor(x.y));
    const Vec2 tangent{u(rng), u(rng)};
    const auto there = transition(s, p, tangent);
    CHECK(there.point.chart.kind == ChartKind::Handle);
    CHECK(std::abs(std::abs(there.point.coords.x) - 1.0) == 0.0);
    const auto back = transition(s, there.point, there.tangent);
    CHECK(back.point.chart == p.chart);
    CHECK(wrapped_gap(back.point.coords, p.coords) < 1e-9);
    CHECK((back.tangent - tangent).norm() < 1e-9);
  }
  for (int i = 0; i < 100; ++i) {
    const SurfacePoint p = handle_point(i % 2, i % 3 == 0 ? -1.0 : 1.0, kPi * u(rng));
    const auto there = transition(s, p, {u(rng), u(rng)});
    const auto back = transition(s, there.point, there.tangent);
    CHECK(back.point.chart == p.chart);
    CHECK(chart_distance(back.point, p) < 1e-9);
  }
}

TEST_CASE("transition rejects interior points") {
  const auto s = surface(2);
  CHECK(code_of([&] { transition(s, torus_point(0, 0.6, 0.1), {1.0, 0.0}); }) == ErrorCode::NotOnBoundary);
  CHECK(code_of([&] { transition(s, handle_point(0, 0.5, 0.0), {1.0, 0.0}); }) == ErrorCode::NotOnBoundary);
}

TEST_CASE("topology") {
  for (int g = 2; g <= 6; ++g) {
    const auto r = validate_topology(surface(g));
    CHECK(r.euler == 2 - 2 * g);
    CHECK(r.expected == 2 - 2 * g);
  }
  auto s = surface(3);
  s.gluings.pop_back();
  CHECK(code_of([&] { validate_topology(s); }) == ErrorCode::TopologyMismatch);
  auto d = surface(2);
  d.gluings.push_back(d.gluings.front());
  CHECK(code_of([&] { validate_topology(d); }) == ErrorCode::TopologyMismatch);
}

TEST_CASE("build is deterministic") {
  CHECK(to_json(surface(4)).dump() == to_json(surface(4)).dump());
  const auto j = to_json(surface(2));
  CHECK(j["gluings"].size() == 2);
  CHECK(j["tori"][0]["L"].is_null());
}
