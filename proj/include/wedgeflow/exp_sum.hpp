// SPDX-License-Identifier: MIT
// include/wedgeflow/exp_sum.hpp
//
// Finite sums x -> sum_i a_i exp(-<d_i, x>) whose exponents come from a
// rotation or reflection label M via d = (I - M)^T mu.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/geometry.hpp"

namespace wedgeflow {

template <typename Scalar>
struct ExponentialTerm {
  Scalar coeff = 0;
  Vec2<Scalar> exponent = Vec2<Scalar>::Zero();
  LabelMatrix<Scalar> label;
};

using ExponentialTermd = ExponentialTerm<double>;

/// d = (I - M)^T mu, so that <d, x> = <mu, (I - M) x>.
template <typename Scalar>
Vec2<Scalar> label_exponent(const Vec2<Scalar>& mu, const LabelMatrix<Scalar>& m) {
  return (Mat2<Scalar>::Identity() - m.matrix()).transpose() * mu;
}

template <typename Scalar>
ExponentialTerm<Scalar> make_term(Scalar coeff, const Vec2<Scalar>& mu,
                                  const LabelMatrix<Scalar>& label) {
  return {coeff, label_exponent(mu, label), label};
}

template <typename Scalar>
struct SumOfExponentials {
  std::vector<ExponentialTerm<Scalar>> terms;
  Drift<Scalar> drift;
  WedgeGeometry<Scalar> geometry;

  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }

  Scalar max_abs_coeff() const {
    Scalar m = 0;
    for (const auto& t : terms) m = std::max<Scalar>(m, std::abs(t.coeff));
    return m;
  }
};

using SumOfExponentialsd = SumOfExponentials<double>;

/// Relative threshold below which a coefficient counts as zero.
inline constexpr double kPruneRelTol = 1e-13;

/// Drops terms with |a| <= rel * max |a|.
template <typename Scalar>
void prune(SumOfExponentials<Scalar>& sum, Scalar rel = Scalar(kPruneRelTol)) {
  const Scalar cut = rel * sum.max_abs_coeff();
  std::erase_if(sum.terms, [&](const auto& t) { return std::abs(t.coeff) <= cut; });
}

/// Smallest pairwise distance between exponent vectors (infinity for < 2 terms).
template <typename Scalar>
Scalar min_exponent_separation(const SumOfExponentials<Scalar>& sum) {
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < sum.terms.size(); ++i)
    for (std::size_t j = i + 1; j < sum.terms.size(); ++j)
      best = std::min<Scalar>(best, (sum.terms[i].exponent - sum.terms[j].exponent).norm());
  return best;
}

template <typename Scalar>
SumOfExponentials<Scalar> scaled(SumOfExponentials<Scalar> sum, Scalar factor) {
  for (auto& t : sum.terms) t.coeff *= factor;
  return sum;
}

namespace detail {
// exp(-s), with arguments below -700 treated as an exact zero.
template <typename Scalar>
Scalar decay_factor(Scalar s) {
  return s > Scalar(700) ? Scalar(0) : std::exp(-s);
}
}  // namespace detail

template <typename Scalar>
Scalar eval(const SumOfExponentials<Scalar>& sum, const Vec2<Scalar>& x) {
  Scalar acc = 0;
  for (const auto& t : sum.terms) acc += t.coeff * detail::decay_factor(t.exponent.dot(x));
  return acc;
}

template <typename Scalar>
Vec2<Scalar> gradient(const SumOfExponentials<Scalar>& sum, const Vec2<Scalar>& x) {
  Vec2<Scalar> g = Vec2<Scalar>::Zero();
  for (const auto& t : sum.terms)
    g -= t.coeff * detail::decay_factor(t.exponent.dot(x)) * t.exponent;
  return g;
}

template <typename Scalar>
Scalar laplacian(const SumOfExponentials<Scalar>& sum, const Vec2<Scalar>& x) {
  Scalar acc = 0;
  for (const auto& t : sum.terms)
    acc += t.coeff * detail::decay_factor(t.exponent.dot(x)) * t.exponent.squaredNorm();
  return acc;
}

/// min over theta in [0, xi] of <d, w(theta)>; positive iff the term decays
/// along every ray of the wedge.
template <typename Scalar>
Scalar min_decay_rate(const Vec2<Scalar>& d, Scalar xi) {
  Scalar best = std::min(d.x(), d.dot(unit_vector(xi)));
  if (d.squaredNorm() > 0) {
    // interior minimum of |d| cos(theta - arg d) sits at arg d + pi
    const Scalar t = wrap_angle<Scalar>(std::atan2(d.y(), d.x()) + pi_v<Scalar>,
                                        2 * pi_v<Scalar>, Scalar(0));
    if (t > 0 && t < xi) best = std::min(best, -d.norm());
  }
  return best;
}

template <typename Scalar>
Scalar min_decay_rate(const SumOfExponentials<Scalar>& sum) {
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (const auto& t : sum.terms)
    best = std::min(best, min_decay_rate<Scalar>(t.exponent, sum.geometry.xi));
  return best;
}

/// Polar sampling grid over [0, xi] x (0, r_max]. r_max <= 0 picks a radius
/// where the slowest term has decayed by e^-25.
struct PolarGrid {
  int n_theta = 100;
  int n_r = 100;
  double r_max = 0;
};

template <typename Scalar>
Scalar resolve_radius(const SumOfExponentials<Scalar>& sum, const PolarGrid& grid) {
  if (grid.r_max > 0) return Scalar(grid.r_max);
  const Scalar kappa = min_decay_rate(sum);
  return kappa > 0 ? Scalar(25) / kappa : Scalar(10);
}

template <typename Scalar>
struct SignScan {
  bool single_signed = true;
  Scalar min_value = 0;
  Scalar max_value = 0;
  Scalar r_max = 0;
};

/// Checks that the sum keeps one sign on a polar grid (theta nodes include
/// both faces; radii exclude the vertex). Values within 1e-13 max|a| of zero
/// count as zero.
template <typename Scalar>
SignScan<Scalar> sign_scan(const SumOfExponentials<Scalar>& sum, const PolarGrid& grid = {}) {
  SignScan<Scalar> out;
  out.r_max = resolve_radius(sum, grid);
  out.min_value = std::numeric_limits<Scalar>::infinity();
  out.max_value = -std::numeric_limits<Scalar>::infinity();
  const Scalar xi = sum.geometry.xi;
  for (int i = 0; i < grid.n_theta; ++i) {
    const Scalar theta = grid.n_theta == 1 ? xi / 2 : xi * i / (grid.n_theta - 1);
    const Vec2<Scalar> w = unit_vector(theta);
    for (int j = 1; j <= grid.n_r; ++j) {
      const Scalar v = eval(sum, Vec2<Scalar>(out.r_max * j / grid.n_r * w));
      out.min_value = std::min(out.min_value, v);
      out.max_value = std::max(out.max_value, v);
    }
  }
  const Scalar zero_band = Scalar(kPruneRelTol) * sum.max_abs_coeff();
  out.single_signed = !(out.min_value < -zero_band && out.max_value > zero_band);
  return out;
}

}  // namespace wedgeflow
