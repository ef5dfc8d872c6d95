// SPDX-License-Identifier: MIT
// include/wedgeflow/quadrature.hpp
//
// Integrals of exponential sums over the wedge and its faces. Radial
// integrals are done in closed form per term; the angular integral uses
// Gauss-Legendre nodes.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/exp_sum.hpp"
#include "wedgeflow/geometry.hpp"

namespace wedgeflow {

template <typename Scalar>
struct GaussRule {
  std::vector<Scalar> nodes;    ///< on [-1, 1]
  std::vector<Scalar> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int n) {
  using std::abs;
  using std::cos;
  // (P_n(x), P_n'(x)) by the three-term recurrence
  auto legendre = [n](Scalar x) {
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair<Scalar, Scalar>(p1, n * (x * p1 - p0) / (x * x - 1));
  };
  GaussRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = cos(pi_v<Scalar> * (i + Scalar(0.75)) / (n + Scalar(0.5)));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const Scalar dx = p / dp;
      x -= dx;
      if (abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    const Scalar dp = legendre(x).second;
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Integral of f over [a, b] with the given rule.
template <typename Scalar, typename F>
Scalar integrate(const GaussRule<Scalar>& rule, Scalar a, Scalar b, F&& f) {
  const Scalar half = (b - a) / 2;
  const Scalar mid = (a + b) / 2;
  Scalar acc = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

/// Angular node counts: the estimate uses `nodes`, the error estimate
/// compares against `coarse_nodes`.
struct QuadratureSpec {
  int nodes = 256;
  int coarse_nodes = 128;
};

/// Area integral of sum * e^{-<lambda, x>} over the wedge by
/// sum_i a_i int_0^xi d theta / <d_i + lambda, w(theta)>^2.
template <typename Scalar>
Scalar wedge_integral(const SumOfExponentials<Scalar>& sum, const GaussRule<Scalar>& rule,
                      const Vec2<Scalar>& lambda = Vec2<Scalar>::Zero()) {
  return integrate<Scalar>(rule, Scalar(0), sum.geometry.xi, [&](Scalar theta) {
    const Vec2<Scalar> w = unit_vector(theta);
    Scalar acc = 0;
    for (const auto& t : sum.terms) {
      const Scalar beta = (t.exponent + lambda).dot(w);
      acc += t.coeff / (beta * beta);
    }
    return acc;
  });
}

/// Same integral on geometrically graded panels toward both faces; for
/// integrands with boundary layers (large lambda).
template <typename Scalar>
Scalar wedge_integral_graded(const SumOfExponentials<Scalar>& sum, const Vec2<Scalar>& lambda,
                             int levels = 12, int nodes = 64) {
  const auto rule = gauss_legendre<Scalar>(nodes);
  const Scalar xi = sum.geometry.xi;
  auto f = [&](Scalar theta) {
    const Vec2<Scalar> w = unit_vector(theta);
    Scalar acc = 0;
    for (const auto& t : sum.terms) {
      const Scalar beta = (t.exponent + lambda).dot(w);
      acc += t.coeff / (beta * beta);
    }
    return acc;
  };
  std::vector<Scalar> cuts{Scalar(0)};
  Scalar h = xi / 4;
  for (int k = 0; k < levels; ++k) h /= 4;
  for (int k = 0; k <= levels; ++k, h *= 4) cuts.push_back(h);
  const std::size_t half = cuts.size();
  for (std::size_t k = half; k-- > 1;) cuts.push_back(xi - cuts[k]);
  cuts.push_back(xi);
  Scalar acc = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) acc += integrate<Scalar>(rule, cuts[k], cuts[k + 1], f);
  return acc;
}

/// Integral of sum * e^{-<lambda, x>} along a face ray: sum_i a_i / <d_i + lambda, w_face>.
template <typename Scalar>
Scalar face_integral(const SumOfExponentials<Scalar>& sum, Face face,
                     const Vec2<Scalar>& lambda = Vec2<Scalar>::Zero()) {
  const Vec2<Scalar> w = sum.geometry.face_direction(face);
  Scalar acc = 0;
  for (const auto& t : sum.terms) {
    const Scalar beta = (t.exponent + lambda).dot(w);
    if (!(beta > 0)) throw NonIntegrableError("face integrand does not decay");
    acc += t.coeff / beta;
  }
  return acc;
}

/// Integral over the region {y in S : <y, n_i> <= a_i} (a parallelogram),
/// by tensor Gauss quadrature in the coordinates u = (<y, n1>, <y, n2>).
template <typename Scalar>
Scalar parallelogram_integral(const SumOfExponentials<Scalar>& sum, Scalar a1, Scalar a2,
                              int nodes = 64) {
  using std::sin;
  const auto& g = sum.geometry;
  Mat2<Scalar> n;
  n.row(0) = g.n1.transpose();
  n.row(1) = g.n2.transpose();
  const Mat2<Scalar> ninv = n.inverse();
  const auto rule = gauss_legendre<Scalar>(nodes);
  const Scalar jac = 1 / sin(g.xi);
  return jac * integrate<Scalar>(rule, Scalar(0), a1, [&](Scalar u1) {
    return integrate<Scalar>(rule, Scalar(0), a2, [&](Scalar u2) {
      return eval(sum, Vec2<Scalar>(ninv * Vec2<Scalar>(u1, u2)));
    });
  });
}

template <typename Scalar>
struct NormalizedDensity {
  SumOfExponentials<Scalar> sum;   ///< scaled to unit mass
  Scalar normalizing_constant = 0; ///< factor applied to the input sum
  Scalar quadrature_error_estimate = 0;
};

using NormalizedDensityd = NormalizedDensity<double>;

/// Scales a single-signed decaying sum to a probability density. The sign
/// is chosen so the result is nonnegative.
template <typename Scalar>
NormalizedDensity<Scalar> normalize(const SumOfExponentials<Scalar>& sum,
                                    const QuadratureSpec& quad = {}) {
  using std::abs;
  if (sum.empty()) throw InvalidDensityError("empty exponential sum");
  Scalar scale = 0;
  for (const auto& t : sum.terms) scale = std::max(scale, Scalar(t.exponent.norm()));
  // rates within rounding of zero along a face count as non-decaying
  if (!(min_decay_rate(sum) > Scalar(1e-12) * scale)) {
    throw NonIntegrableError("an exponent does not decay along some ray of the wedge");
  }
  const auto scan = sign_scan(sum);
  if (!scan.single_signed) throw InvalidDensityError("candidate density changes sign");
  const Scalar fine = wedge_integral(sum, gauss_legendre<Scalar>(quad.nodes));
  const Scalar coarse = wedge_integral(sum, gauss_legendre<Scalar>(quad.coarse_nodes));
  if (!std::isfinite(static_cast<double>(fine)) || fine == 0) {
    throw NonIntegrableError("wedge integral is zero or not finite");
  }
  NormalizedDensity<Scalar> out;
  out.normalizing_constant = 1 / fine;
  out.sum = scaled(sum, out.normalizing_constant);
  out.quadrature_error_estimate = abs(fine - coarse) / abs(fine);
  return out;
}

/// Mass of the density outside radius R: sum_i a_i int e^{-beta R}(beta R + 1)/beta^2 d theta.
template <typename Scalar>
Scalar radial_tail_mass(const SumOfExponentials<Scalar>& sum, Scalar radius, int nodes = 128) {
  const auto rule = gauss_legendre<Scalar>(nodes);
  return integrate<Scalar>(rule, Scalar(0), sum.geometry.xi, [&](Scalar theta) {
    const Vec2<Scalar> w = unit_vector(theta);
    Scalar acc = 0;
    for (const auto& t : sum.terms) {
      const Scalar beta = t.exponent.dot(w);
      acc += t.coeff * std::exp(-beta * radius) * (beta * radius + 1) / (beta * beta);
    }
    return acc;
  });
}

/// Smallest radius (to bisection accuracy) whose tail mass is below `mass`.
template <typename Scalar>
Scalar radius_for_tail_mass(const SumOfExponentials<Scalar>& sum, Scalar mass) {
  using std::abs;
  Scalar hi = 1;
  while (abs(radial_tail_mass(sum, hi)) >= mass) {
    hi *= 2;
    if (hi > Scalar(1e6)) throw NonIntegrableError("tail mass does not vanish");
  }
  Scalar lo = 0;
  for (int it = 0; it < 60; ++it) {
    const Scalar mid = (lo + hi) / 2;
    (abs(radial_tail_mass(sum, mid)) >= mass ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace wedgeflow
