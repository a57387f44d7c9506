#pragma once

// Test-only oracles and generators. Nothing here calls into the
// implementation's angle lift.

#include "genusflow/sp2_index.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace genusflow::testing {

// Eigenvalue-based rho: root of l^2 - tr l + 1 = 0. On the unit circle the
// root is picked with Im sign = sign(c - b); real spectra map to +-1.
inline std::complex<double> oracle_rho(const sp2::SymplecticMatrix2& m) {
  const double tr = m.trace();
  const double disc = tr * tr - 4.0;
  if (disc >= 0.0) return {tr >= 0.0 ? 1.0 : -1.0, 0.0};
  const double im = 0.5 * std::sqrt(-disc);
  return {0.5 * tr, (m.c() - m.b()) >= 0.0 ? im : -im};
}

// Brute-force lift on a dense uniform grid.
inline double oracle_mean_index(const std::function<sp2::SymplecticMatrix2(double)>& fn,
                                int n = 20000) {
  double eta = 0.0;
  std::complex<double> prev = oracle_rho(fn(0.0));
  for (int i = 1; i <= n; ++i) {
    const auto cur = oracle_rho(fn(static_cast<double>(i) / n));
    eta += std::arg(cur / prev);
    prev = cur;
  }
  return eta / std::numbers::pi;
}

// Random Hamiltonian generator X = J S (S symmetric), i.e. traceless.
inline sp2::Mat2 random_generator(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  const double p = n(rng), q = n(rng), r = n(rng);
  // J = [[0,-1],[1,0]], S = [[p,q],[q,r]]
  return sp2::Mat2{-q, -r, p, q};
}

// Path of the linear flow dPhi/dt = X(t) Phi with piecewise-constant random
// generators; exact sampling at every step.
inline sp2::SymplecticPath random_path(std::mt19937_64& rng, int steps = 200,
                                       double scale = 4.0) {
  std::vector<sp2::PathSample> samples;
  samples.push_back({0.0, sp2::SymplecticMatrix2::identity()});
  sp2::SymplecticMatrix2 m;
  const int pieces = 5;
  std::vector<sp2::Mat2> gens;
  for (int i = 0; i < pieces; ++i) gens.push_back(random_generator(rng, scale));
  const double dt = 1.0 / steps;
  for (int k = 1; k <= steps; ++k) {
    const auto& x = gens[static_cast<std::size_t>((k - 1) * pieces / steps)];
    m = sp2::SymplecticMatrix2::exp_traceless(sp2::Mat2{x.a * dt, x.b * dt, x.c * dt, x.d * dt}) * m;
    samples.push_back({k == steps ? 1.0 : k * dt, m});
  }
  return sp2::SymplecticPath(std::move(samples));
}

inline bool nondegenerate_end(const sp2::SymplecticPath& p, double gap = 1e-3) {
  const double tr = p.end().trace();
  return std::abs(tr - 2.0) > gap && std::abs(tr + 2.0) > gap;
}

} // namespace genusflow::testing
