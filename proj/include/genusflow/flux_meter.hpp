#pragma once

// Flux of the constructed flow over the generator loops of each torus, and
// the flux condition checked through continued-fraction convergents.

#include "genusflow/surface_atlas.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace genusflow {

enum class LoopKind { Vertical, Horizontal };

std::string to_string(LoopKind k);

/// Vertical loops are the lines x = offset traversed in +y (class a_i);
/// horizontal loops are y = offset traversed in -x (class b_i).
struct GeneratorLoop {
  int torus = 0;
  LoopKind kind = LoopKind::Vertical;
  double offset = 0.0;
  bool reversed = false;
  double clearance = 0.0;       // distance of the loop to the closed cutouts
  double sweep_clearance = 0.0; // same for the images under the torus flow, t in [0, 1]
};

struct LoopOptions {
  double scan_step = 0.01;
  double min_clearance = 0.005;
};

/// Throws NoValidOffset.
std::vector<GeneratorLoop> generator_loops(const GluedSurface& s, const LoopOptions& opts = {});

/// A closed curve s -> point(s), s in [0, 1], in one torus chart.
struct LoopPath {
  int torus = 0;
  std::function<Vec2(double)> point;
  std::function<Vec2(double)> tangent;
};

LoopPath path_of(const GeneratorLoop& loop);

struct Quadrature {
  int n_s = 64;
  int n_t = 64;
};

/// Field X_t(x) on the surface; the default is vector_field.
using TimeFieldFn = std::function<Vec2(const SurfacePoint&, double t)>;

/// Composite midpoint rule for the double integral of omega(X_t(gamma(s)),
/// gamma'(s)) over [0, 1]^2, omega = dx ^ dy. Throws SweepHitsCutout.
double swept_area(const GluedSurface& s, const LoopPath& loop, Quadrature q = {}, const TimeFieldFn& field = {});
double swept_area(const GluedSurface& s, const GeneratorLoop& loop, Quadrature q = {},
                  const TimeFieldFn& field = {});

struct LoopFlux {
  GeneratorLoop loop;
  double value = 0.0;
};

struct FluxVector {
  std::vector<double> entries; // (u_1, v_1, ..., u_g, v_g)
  std::vector<LoopFlux> per_loop;
};

/// Throws FluxMismatch when an entry differs from the configured slope by
/// more than tol.
FluxVector flux_vector(const GluedSurface& s, Quadrature q = {}, const TimeFieldFn& field = {}, double tol = 1e-6);

struct Convergent {
  std::int64_t p = 0, q = 1;
};

/// Convergents of x with denominator at most max_q. The expansion stops early
/// when a convergent reproduces x to rounding.
std::vector<Convergent> convergents(double x, std::int64_t max_q);

struct RatioCheck {
  int torus = 0;
  double u = 0.0, v = 0.0;
  bool u_nonzero = true;
  double ratio = 0.0;
  std::optional<Convergent> qualifying; // smallest q <= Q with |v/u - p/q| < delta / q^2
  std::optional<std::int64_t> exact_q;  // denominator at which the expansion terminates
  bool irrational_at_scale = false;
};

struct FluxConditionReport {
  std::int64_t Q = 0;
  double delta = 0.0;
  std::vector<RatioCheck> per_genus;
  bool holds = false;
};

/// Throws PreconditionViolation for Q < 1, delta <= 0 or an odd-length flux.
FluxConditionReport flux_condition_check(const std::vector<double>& flux, std::int64_t Q, double delta);

nlohmann::json to_json(const GeneratorLoop& l);
nlohmann::json to_json(const FluxVector& f);
nlohmann::json to_json(const FluxConditionReport& r);

} // namespace genusflow
