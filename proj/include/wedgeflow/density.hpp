// SPDX-License-Identifier: MIT
// include/wedgeflow/density.hpp
//
// Closed-form stationary densities for alpha = -l: the two-term blocks pi_j,
// the coefficients c_k, and three equivalent assemblies (expanded sum,
// determinant, clockwise construction via mirroring).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/exp_sum.hpp"
#include "wedgeflow/geometry.hpp"

namespace wedgeflow {

/// <mu, (I - M) v>.
template <typename Scalar>
Scalar label_inner(const Vec2<Scalar>& mu, const LabelMatrix<Scalar>& m, const Vec2<Scalar>& v) {
  return mu.dot(v - m.matrix() * v);
}

/// zeta_j = <mu, Rot_j e1>.
template <typename Scalar>
Scalar zeta_j(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d, int j) {
  return d.mu.dot(rot_k(g, j).matrix().col(0));
}

/// Validates (g, d) for the closed-form construction and returns l.
/// Order of checks: alpha, stability, then the excluded drift directions.
template <typename Scalar>
int require_density_inputs(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d) {
  const auto ell = ell_of_alpha(g);
  if (!ell) {
    throw NotSumOfExponentialsError(
        "alpha = " + std::to_string(static_cast<double>(g.alpha)) +
        " is not a nonpositive integer: the stationary density is not a finite sum of "
        "exponentials");
  }
  switch (drift_admissible(g, d, *ell)) {
    case DriftClass::unstable:
      throw UnstableDriftError("drift direction outside (xi - epsilon, delta): "
                               "no stationary distribution");
    case DriftClass::stable_only:
      throw DegenerateDriftError("drift direction hits an excluded angle "
                                 "sin(theta_mu - 2 delta - k xi) = 0");
    case DriftClass::in_theta_ell:
      break;
  }
  return *ell;
}

namespace detail {
template <typename Scalar>
Scalar checked_denominator(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d, int k) {
  using std::abs;
  const Scalar den = d.mu.dot((ref_k(g, k).matrix() - rot_k(g, k).matrix()) * g.v1);
  if (abs(den) <= Scalar(1e-12) * d.mu.squaredNorm()) {
    throw DegenerateDriftError("vanishing denominator <mu, (Ref_k - Rot_k) v1> at k = " +
                               std::to_string(k));
  }
  return den;
}

template <typename Scalar>
SumOfExponentials<Scalar> empty_sum(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d) {
  SumOfExponentials<Scalar> s;
  s.geometry = g;
  s.drift = d;
  return s;
}
}  // namespace detail

/// pi_j(x) = [<mu,(I-Rot_j)v1> e^{-<mu,(I-Rot_j)x>} - <mu,(I-Ref_j)v1> e^{-<mu,(I-Ref_j)x>}]
///           / <mu,(Ref_j - Rot_j)v1>, with zero coefficients pruned.
template <typename Scalar>
SumOfExponentials<Scalar> pi_j(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d, int j) {
  const Scalar den = detail::checked_denominator(g, d, j);
  const auto rot = rot_k(g, j);
  const auto ref = ref_k(g, j);
  auto s = detail::empty_sum(g, d);
  s.terms.push_back(make_term(label_inner(d.mu, rot, g.v1) / den, d.mu, rot));
  s.terms.push_back(make_term(-label_inner(d.mu, ref, g.v1) / den, d.mu, ref));
  prune(s);
  return s;
}

/// c_k = (-1)^k prod_{i<j; i,j != k} <mu,(Rot_i - Rot_j)e1> / <mu,(Ref_k - Rot_k)v1>.
template <typename Scalar>
std::vector<Scalar> coefficients_ck(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d,
                                    int ell) {
  std::vector<Scalar> zeta(ell + 1);
  for (int j = 0; j <= ell; ++j) zeta[j] = zeta_j(g, d, j);
  std::vector<Scalar> c(ell + 1);
  for (int k = 0; k <= ell; ++k) {
    Scalar prod = 1;
    for (int i = 0; i <= ell; ++i)
      for (int j = i + 1; j <= ell; ++j)
        if (i != k && j != k) prod *= zeta[i] - zeta[j];
    c[k] = (k % 2 == 0 ? prod : -prod) / detail::checked_denominator(g, d, k);
  }
  return c;
}

template <typename Scalar>
struct RecursionCheck {
  std::vector<Scalar> residual;  ///< k = 1..l
  std::vector<Scalar> scale;     ///< magnitude of the larger product in each residual
};

/// residual_k = c_k <mu,(I-Ref_k)v1><mu,(I-Rot_{k-1})v2>
///            - c_{k-1} <mu,(I-Ref_k)v2><mu,(I-Rot_{k-1})v1>.
template <typename Scalar>
RecursionCheck<Scalar> check_recursion(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d,
                                       const std::vector<Scalar>& c) {
  using std::abs;
  RecursionCheck<Scalar> out;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const auto ref = ref_k(g, static_cast<int>(k));
    const auto rot = rot_k(g, static_cast<int>(k) - 1);
    const Scalar lhs = c[k] * label_inner(d.mu, ref, g.v1) * label_inner(d.mu, rot, g.v2);
    const Scalar rhs = c[k - 1] * label_inner(d.mu, ref, g.v2) * label_inner(d.mu, rot, g.v1);
    out.residual.push_back(lhs - rhs);
    out.scale.push_back(std::max(abs(lhs), abs(rhs)));
  }
  return out;
}

/// Expanded sum with terms ordered Rot_0, Ref_1, Rot_1, ..., Ref_l, Rot_l.
/// The Ref_0 term vanishes identically ((I - Ref_0) v1 = 0) and is omitted.
template <typename Scalar>
SumOfExponentials<Scalar> density_expanded(const WedgeGeometry<Scalar>& g,
                                           const Drift<Scalar>& d) {
  const int ell = require_density_inputs(g, d);
  const auto c = coefficients_ck(g, d, ell);
  auto s = detail::empty_sum(g, d);
  for (int k = 0; k <= ell; ++k) {
    if (k > 0) {
      const auto ref = ref_k(g, k);
      s.terms.push_back(make_term(-c[k] * label_inner(d.mu, ref, g.v1), d.mu, ref));
    }
    const auto rot = rot_k(g, k);
    s.terms.push_back(make_term(c[k] * label_inner(d.mu, rot, g.v1), d.mu, rot));
  }
  prune(s);
  return s;
}

/// The (l+1)x(l+1) determinant with first row pi_j(x) and lower rows
/// zeta_j^{l-1}, ..., zeta_j, 1.
template <typename Scalar>
Scalar density_determinant(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d,
                           const Vec2<Scalar>& x) {
  const int ell = require_density_inputs(g, d);
  const int n = ell + 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  for (int j = 0; j < n; ++j) {
    m(0, j) = eval(pi_j(g, d, j), x);
    const Scalar z = zeta_j(g, d, j);
    Scalar p = 1;
    for (int row = n - 1; row >= 1; --row) {
      m(row, j) = p;
      p *= z;
    }
  }
  return m.determinant();
}

/// Clockwise construction: run the anticlockwise construction on the wedge
/// mirrored across its bisector (delta and epsilon swapped, mu mirrored) and
/// map exponents and labels back.
template <typename Scalar>
SumOfExponentials<Scalar> density_clockwise(const WedgeGeometry<Scalar>& g,
                                            const Drift<Scalar>& d) {
  require_density_inputs(g, d);
  const auto mirror = LabelMatrix<Scalar>::reflection(g.xi / 2);
  const Mat2<Scalar> r = mirror.matrix();
  const auto gm = make_wedge(g.xi, g.epsilon, g.delta);
  const auto dm = make_drift<Scalar>(r * d.mu);
  const auto mirrored = density_expanded(gm, dm);
  auto s = detail::empty_sum(g, d);
  for (const auto& t : mirrored.terms) {
    ExponentialTerm<Scalar> out;
    out.coeff = t.coeff;
    out.exponent = r * t.exponent;
    out.label = mirror * t.label * mirror;
    s.terms.push_back(out);
  }
  return s;
}

}  // namespace wedgeflow
