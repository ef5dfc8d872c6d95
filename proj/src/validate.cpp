// SPDX-License-Identifier: MIT
// src/validate.cpp

#include "wedgeflow/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "wedgeflow/density.hpp"
#include "wedgeflow/quadrature.hpp"
#include "wedgeflow/spectral.hpp"
#include "wedgeflow/validation.hpp"

namespace wedgeflow {

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  if (!(pde_residual_max <= tolerances.pde)) out.emplace_back("pde");
  if (!(pde_fd_residual_max <= tolerances.fd_agreement)) out.emplace_back("pde_fd");
  if (!(bc1_residual_max <= tolerances.bc)) out.emplace_back("bc1");
  if (!(bc2_residual_max <= tolerances.bc)) out.emplace_back("bc2");
  if (!(bar_residual_max <= bar_tolerance)) out.emplace_back("bar");
  if (sign_change_found) out.emplace_back("sign");
  if (corner_checked) {
    if (!(std::abs(corner_slope - ell) <= corner_slope_tolerance)) out.emplace_back("corner_slope");
    if (!(corner_spread <= tolerances.corner_spread)) out.emplace_back("corner_spread");
  }
  return out;
}

namespace {

// Deterministic interior sample: angles strictly inside (0, xi), radii
// log-uniform over [1e-3, r_max].
std::vector<Vec2d> interior_points(double xi, double r_max, int n) {
  std::mt19937_64 engine(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2d> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double theta = xi * (0.001 + 0.998 * u(engine));
    const double r = 1e-3 * std::pow(r_max / 1e-3, u(engine));
    xs.emplace_back(r * unit_vector(theta));
  }
  return xs;
}

// Directions spread over the open dual cone {arg in (xi - pi/2, pi/2)},
// with lengths cycling through [0.25, 3.25).
std::vector<Vec2d> dual_cone_lambdas(double xi, int n) {
  std::vector<Vec2d> out;
  const double lo = xi - std::numbers::pi / 2, hi = std::numbers::pi / 2;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    const double scale = 0.25 + 3.0 * ((i * 7) % n) / n;
    out.emplace_back(scale * unit_vector(lo + t * (hi - lo)));
  }
  return out;
}

}  // namespace

ValidationReport validate(const WedgeGeometryd& g, const Driftd& d, const ValidationOptions& opts) {
  ValidationReport rep;
  rep.tolerances = opts.tol;
  auto sum = density_expanded(g, d);
  rep.ell = *ell_of_alpha(g);
  rep.terms = sum.size();
  if (opts.perturb_coefficient != 0) {
    const auto k = static_cast<std::size_t>(std::clamp<int>(opts.perturb_term, 0, sum.size() - 1));
    sum.terms[k].coeff *= 1 + opts.perturb_coefficient;
  }

  rep.sign_change_found = has_sign_change(sum, opts.sign_grid);

  const double kappa = min_decay_rate(sum);
  const double r_max = kappa > 0 ? 20.0 / kappa : 20.0;
  const auto xs = interior_points(g.xi, r_max, opts.interior_points);
  rep.pde_residual_max = pde_residual(sum, d, xs).max_scaled;

  const auto ss = face_samples<double>(opts.face_points);
  rep.bc1_residual_max = bc_residual(sum, d, g, Face::F1, ss).max_scaled;
  rep.bc2_residual_max = bc_residual(sum, d, g, Face::F2, ss).max_scaled;

  rep.bar_tolerance = opts.tol.bar_floor;
  if (rep.sign_change_found || !(kappa > 0)) {
    rep.bar_residual_max = std::numeric_limits<double>::infinity();
    rep.pde_fd_residual_max = std::numeric_limits<double>::infinity();
  } else {
    const auto den = normalize(sum);
    rep.quadrature_error = den.quadrature_error_estimate;
    // Central differences at h = 1e-5 lose about eps / h^2 of the term
    // magnitudes to rounding, which cancel heavily for l >= 2. The
    // cross-check therefore runs in extended precision.
    using L = long double;
    const auto dl = make_drift<L>(d.mu.cast<L>());
    auto sum_l = density_expanded(make_wedge<L>(g.xi, g.delta, g.epsilon), dl);
    if (opts.perturb_coefficient != 0) {
      const auto k = static_cast<std::size_t>(std::clamp<int>(opts.perturb_term, 0, sum_l.size() - 1));
      sum_l.terms[k].coeff *= 1 + static_cast<L>(opts.perturb_coefficient);
    }
    sum_l = scaled(sum_l, static_cast<L>(den.normalizing_constant));
    std::vector<Vec2<L>> fd_points;
    for (std::size_t i = 0; i < std::min<std::size_t>(10, xs.size()); ++i) fd_points.push_back(xs[i].cast<L>());
    rep.pde_fd_residual_max =
        static_cast<double>(pde_residual_fd(sum_l, dl, fd_points, static_cast<L>(1e-5)).max_abs);
    const auto bar = bar_check(den, d, dual_cone_lambdas(g.xi, opts.bar_lambdas));
    rep.bar_residual_max = bar.max_residual;
    rep.bar_tolerance = std::max(opts.tol.bar_floor, 10 * bar.max_error_estimate);
  }

  if (rep.ell >= 1 && !rep.sign_change_found) {
    rep.corner_checked = true;
    rep.corner_slope_tolerance = rep.ell == 1 ? 1e-3 : 1e-2;
    const auto radii = default_corner_radii<double>();
    double slope_worst = rep.ell, c_min = 0, c_max = 0, c_sum = 0;
    const int n_theta = 9;
    for (int i = 0; i < n_theta; ++i) {
      const double theta = g.xi * (i + 0.5) / n_theta;
      const auto fit = corner_limit(sum, theta, radii);
      if (std::abs(fit.slope - rep.ell) >= std::abs(slope_worst - rep.ell)) slope_worst = fit.slope;
      c_min = i == 0 ? fit.constant : std::min(c_min, fit.constant);
      c_max = i == 0 ? fit.constant : std::max(c_max, fit.constant);
      c_sum += fit.constant;
    }
    rep.corner_slope = slope_worst;
    rep.corner_spread = (c_max - c_min) / std::abs(c_sum / n_theta);
  }

  rep.passed = rep.failures().empty();
  return rep;
}

}  // namespace wedgeflow
