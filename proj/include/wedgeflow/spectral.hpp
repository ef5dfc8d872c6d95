// SPDX-License-Identifier: MIT
// include/wedgeflow/spectral.hpp
//
// Corner expansion of the density in modified Bessel functions, the
// coefficient determinants that vanish below order l, a fitted corner
// limit, and the exponential/Vandermonde sign determinant.
//
// Formulas with omega_k assume |mu| = 1; public entry points rescale mu.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "wedgeflow/density.hpp"
#include "wedgeflow/errors.hpp"
#include "wedgeflow/geometry.hpp"

namespace wedgeflow {

template <typename Scalar>
Scalar cheb_T(int n, Scalar x) {
  if (n == 0) return 1;
  Scalar t0 = 1, t1 = x;
  for (int k = 2; k <= n; ++k) {
    const Scalar t2 = 2 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

/// U_n(x) for n >= -1, with U_{-1} = 0. Negative n below -1 gives 0 too,
/// which is what the h_{j,n} formula needs at n = 1.
template <typename Scalar>
Scalar cheb_U(int n, Scalar x) {
  if (n < 0) return 0;
  Scalar u0 = 1, u1 = 2 * x;
  if (n == 0) return u0;
  for (int k = 2; k <= n; ++k) {
    const Scalar u2 = 2 * x * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

/// I_n(r) by its power series, at most 60 terms, stopping at relative 1e-15.
template <typename Scalar>
Scalar bessel_I(int n, Scalar r) {
  using std::abs;
  const Scalar half = r / 2;
  Scalar term = 1;
  for (int k = 1; k <= n; ++k) term *= half / k;
  Scalar acc = term;
  const Scalar q = half * half;
  for (int k = 1; k < 60; ++k) {
    term *= q / (Scalar(k) * (k + n));
    acc += term;
    if (abs(term) <= Scalar(1e-15) * abs(acc)) break;
  }
  return acc;
}

template <typename Scalar>
struct SpectralContext {
  WedgeGeometry<Scalar> geometry;
  Drift<Scalar> drift;  ///< unit-norm copy of the input drift
  int ell = 0;

  /// omega_k = theta_mu - 2 delta - k xi.
  Scalar omega(int k) const { return drift.theta_mu - 2 * geometry.delta - k * geometry.xi; }
  /// zeta_j = <mu, Rot_j e1> = cos(omega_{2j}) for unit mu.
  Scalar zeta(int j) const { return std::cos(omega(2 * j)); }
  std::vector<Scalar> zetas() const {
    std::vector<Scalar> z(ell + 1);
    for (int j = 0; j <= ell; ++j) z[j] = zeta(j);
    return z;
  }
};

using SpectralContextd = SpectralContext<double>;

/// Context for the given inputs; l is read off alpha (0 when alpha is not
/// a nonpositive integer, so the single-term formulas still apply).
template <typename Scalar>
SpectralContext<Scalar> make_spectral_context(const WedgeGeometry<Scalar>& g,
                                              const Drift<Scalar>& d) {
  SpectralContext<Scalar> ctx;
  ctx.geometry = g;
  ctx.drift = make_drift<Scalar>(d.mu / d.norm());
  ctx.ell = ell_of_alpha(g).value_or(0);
  return ctx;
}

/// h_{j,n}(theta) = 1/2 sin(n theta + delta) U_n(c) - <mu, v1/|v1|> sin(n theta) U_{n-1}(c)
///                + 1/2 sin(n theta - delta) U_{n-2}(c),  c = cos(omega_{2j}).
template <typename Scalar>
Scalar h_jn(const SpectralContext<Scalar>& ctx, int j, int n, Scalar theta) {
  using std::sin;
  const auto& g = ctx.geometry;
  const Scalar c = ctx.zeta(j);
  const Scalar mu_v = ctx.drift.mu.dot(g.v1 / g.v1.norm());
  return sin(n * theta + g.delta) * cheb_U(n, c) / 2 - mu_v * sin(n * theta) * cheb_U(n - 1, c) +
         sin(n * theta - g.delta) * cheb_U(n - 2, c) / 2;
}

/// Truncated expansion I_0(r) + (2 / sin delta) sum_{n=1}^{n_max} h_{j,n}(theta) I_n(r)
/// of e^{<mu, x>} pi_j(x) at x = r w(theta), unit mu.
template <typename Scalar>
Scalar bessel_expansion(const SpectralContext<Scalar>& ctx, int j, Scalar r, Scalar theta,
                        int n_max = 40) {
  using std::sin;
  Scalar acc = 0;
  for (int n = 1; n <= n_max; ++n) acc += h_jn(ctx, j, n, theta) * bessel_I(n, r);
  return bessel_I(0, r) + 2 / sin(ctx.geometry.delta) * acc;
}

namespace detail {
template <typename Scalar, typename LowerRow>
Scalar corner_det(const SpectralContext<Scalar>& ctx, int n, Scalar theta, LowerRow lower) {
  const int size = ctx.ell + 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(size, size);
  for (int j = 0; j < size; ++j) {
    m(0, j) = h_jn(ctx, j, n, theta);
    for (int row = 1; row < size; ++row) m(row, j) = lower(size - 1 - row, ctx.zeta(j));
  }
  return m.determinant();
}
}  // namespace detail

/// Determinant with first row h_{j,n}(theta) and lower rows U_m(cos omega_{2j}),
/// m = l-1, ..., 0. Up to a constant, the coefficient of I_n(|x|) in the
/// expansion of e^{<mu,x>} pi(x).
template <typename Scalar>
Scalar corner_coefficient(const SpectralContext<Scalar>& ctx, int n, Scalar theta) {
  return detail::corner_det(ctx, n, theta, [](int m, Scalar c) { return cheb_U(m, c); });
}

/// Same determinant with the power rows cos(omega_{2j})^m of the density
/// determinant instead of U_m rows.
template <typename Scalar>
Scalar corner_coefficient_power_rows(const SpectralContext<Scalar>& ctx, int n, Scalar theta) {
  return detail::corner_det(ctx, n, theta, [](int m, Scalar c) {
    Scalar p = 1;
    for (int i = 0; i < m; ++i) p *= c;
    return p;
  });
}

/// Geometric radii from 5e-2 down to 1e-3.
template <typename Scalar>
std::vector<Scalar> default_corner_radii(int count = 9) {
  using std::pow;
  std::vector<Scalar> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = Scalar(5e-2) * pow(Scalar(1e-3) / Scalar(5e-2), Scalar(i) / (count - 1));
  return radii;
}

template <typename Scalar>
struct CornerFit {
  Scalar slope = 0;     ///< fitted exponent of r
  Scalar constant = 0;  ///< pi(r w_theta) / (r^l sin(l theta + delta)) at the smallest radius
};

/// Fits log|pi(r w_theta)| = log C + s log r + b r over the radii. The linear
/// term absorbs the first correction to the power law.
template <typename Scalar>
CornerFit<Scalar> corner_limit(const SumOfExponentials<Scalar>& density, Scalar theta,
                               const std::vector<Scalar>& radii) {
  using std::abs;
  using std::log;
  using std::pow;
  using std::sin;
  const auto& g = density.geometry;
  const int ell = ell_of_alpha(g).value_or(0);
  const Scalar shape = sin(ell * theta + g.delta);
  if (abs(shape) <= Scalar(1e-12)) {
    throw DomainError("corner profile sin(l theta + delta) vanishes at the requested angle");
  }
  if (radii.size() < 3) throw DomainError("corner fit needs at least three radii");
  const Vec2<Scalar> w = unit_vector(theta);
  const int n = static_cast<int>(radii.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> a(n, 3);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(n);
  Scalar r_min = radii.front();
  for (int i = 0; i < n; ++i) {
    const Scalar r = radii[i];
    r_min = std::min(r_min, r);
    a(i, 0) = 1;
    a(i, 1) = log(r);
    a(i, 2) = r;
    b(i) = log(abs(eval(density, Vec2<Scalar>(r * w))));
  }
  const Eigen::Matrix<Scalar, 3, 1> coef = a.colPivHouseholderQr().solve(b);
  CornerFit<Scalar> fit;
  fit.slope = coef(1);
  fit.constant = eval(density, Vec2<Scalar>(r_min * w)) / (pow(r_min, ell) * shape);
  return fit;
}

template <typename Scalar>
CornerFit<Scalar> corner_limit(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d,
                               Scalar theta,
                               const std::vector<Scalar>& radii = default_corner_radii<Scalar>()) {
  return corner_limit(density_expanded(g, d), theta, radii);
}

/// Determinant with first row e^{zeta_j y} and lower rows zeta_j^m,
/// m = l-1, ..., 1, 0.
template <typename Scalar>
Scalar schur_sign_det(const std::vector<Scalar>& zeta, Scalar y) {
  using std::exp;
  if (!(y > 0)) throw DomainError("schur_sign_det needs y > 0");
  const int size = static_cast<int>(zeta.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(size, size);
  for (int j = 0; j < size; ++j) {
    m(0, j) = exp(zeta[j] * y);
    Scalar p = 1;
    for (int row = size - 1; row >= 1; --row) {
      m(row, j) = p;
      p *= zeta[j];
    }
  }
  return m.determinant();
}

/// sign of prod_{i<j} (zeta_i - zeta_j).
template <typename Scalar>
int vandermonde_sign(const std::vector<Scalar>& zeta) {
  int sign = 1;
  for (std::size_t i = 0; i < zeta.size(); ++i)
    for (std::size_t j = i + 1; j < zeta.size(); ++j) {
      if (zeta[i] == zeta[j]) return 0;
      if (zeta[i] < zeta[j]) sign = -sign;
    }
  return sign;
}

}  // namespace wedgeflow
