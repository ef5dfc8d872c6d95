// SPDX-License-Identifier: MIT
// tests/oracles.hpp
//
// Independent reference computations for the tests. Nothing here calls the
// library's construction code: matrices come from explicit cos/sin entries,
// determinants from the Leibniz formula, integrals from closed forms.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using V = Eigen::Vector2d;
using M = Eigen::Matrix2d;

constexpr double pi = std::numbers::pi;

inline V w(double t) { return V(std::cos(t), std::sin(t)); }

inline M rho(double t) {
  M m;
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

inline M refl(double t) {
  M m;
  m << std::cos(2 * t), std::sin(2 * t), std::sin(2 * t), -std::cos(2 * t);
  return m;
}

struct Wedge {
  double xi, delta, eps;
  V n1() const { return V(0, 1); }
  V n2() const { return V(std::sin(xi), -std::cos(xi)); }
  V v1() const { return w(delta) / std::sin(delta); }
  V v2() const { return w(xi - eps) / std::sin(eps); }
  M rot(int k) const { return rho(2 * delta + 2 * k * xi); }
  M ref(int k) const { return rho(2 * delta + 2 * (k - 1) * xi) * refl(xi); }
};

/// <mu, (I - m) v>
inline double ip(const V& mu, const M& m, const V& v) { return mu.dot(v - m * v); }

/// x -> e^{-<mu, (I - m) x>}
inline double ex(const V& mu, const M& m, const V& x) { return std::exp(-ip(mu, m, x)); }

/// pi_j straight from its defining display.
inline double pi_j(const Wedge& g, const V& mu, int j, const V& x) {
  const M a = g.rot(j), b = g.ref(j);
  return (ip(mu, a, g.v1()) * ex(mu, a, x) - ip(mu, b, g.v1()) * ex(mu, b, x)) /
         mu.dot((b - a) * g.v1());
}

/// Determinant by the Leibniz permutation sum.
inline double leibniz_det(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double prod = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) prod *= a[i][perm[i]];
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// The density determinant built from pi_j and zeta_j = <mu, Rot_j e1>.
inline double density_det(const Wedge& g, const V& mu, int ell, const V& x) {
  const int n = ell + 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    a[0][j] = pi_j(g, mu, j, x);
    const double z = mu.dot(g.rot(j).col(0));
    for (int row = 1; row < n; ++row) a[row][j] = std::pow(z, n - 1 - row);
  }
  return leibniz_det(a);
}

/// int_S e^{-<c, x>} dx = sin(xi) / (<c, w0> <c, w_xi>) for c decaying on S.
inline double wedge_exp_integral(const V& c, double xi) {
  return std::sin(xi) / (c.dot(w(0)) * c.dot(w(xi)));
}

/// int_0^inf e^{-<c, s w(theta)>} ds
inline double ray_exp_integral(const V& c, double theta) { return 1 / c.dot(w(theta)); }

/// int over {y in S : <y, n_i> <= a_i} of e^{-<c, y>} dy. With u = N y the
/// region is a rectangle and the Jacobian is 1 / sin(xi).
inline double parallelogram_exp_integral(const V& c, double xi, double a1, double a2) {
  M n;
  n << 0, 1, std::sin(xi), -std::cos(xi);
  const V b = n.inverse().transpose() * c;
  auto one = [](double bi, double ai) {
    return std::abs(bi) < 1e-14 ? ai : (1 - std::exp(-bi * ai)) / bi;
  };
  return one(b(0), a1) * one(b(1), a2) / std::sin(xi);
}

/// Closed-form quarter-plane survival with drift mu: prod (1 - e^{-2 mu_i x_i}).
inline double quarter_plane_survival(const V& mu, const V& x) {
  return (1 - std::exp(-2 * mu.x() * x.x())) * (1 - std::exp(-2 * mu.y() * x.y()));
}

/// Draws theta uniformly inside the stability interval, avoiding the
/// excluded directions by a margin.
inline double admissible_theta(const Wedge& g, int ell, std::mt19937_64& rng, double margin = 0.05) {
  std::uniform_real_distribution<double> u(g.xi - g.eps + margin, g.delta - margin);
  for (int tries = 0; tries < 10000; ++tries) {
    const double t = u(rng);
    bool ok = true;
    for (int k = 0; k <= 2 * ell; ++k)
      if (std::abs(std::sin(t - 2 * g.delta - k * g.xi)) < margin) ok = false;
    if (ok) return t;
  }
  return std::nan("");
}

/// Sign of prod_{i<j} (z_i - z_j).
inline int product_sign(const std::vector<double>& z) {
  double p = 1;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) p *= z[i] - z[j];
  return (p > 0) - (p < 0);
}

/// Whether two matrices agree entrywise within tol.
inline bool same_matrix(const M& a, const M& b, double tol = 1e-12) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// Relative spread (max - min) / |mean| of a list of ratios.
inline double relative_spread(const std::vector<double>& r) {
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
  return (*hi - *lo) / std::abs(mean);
}

/// Points in the wedge with angles in (0, xi) and radii in [r_lo, r_hi].
inline std::vector<V> wedge_points(double xi, int n, std::mt19937_64& rng, double r_lo = 0.05,
                                   double r_hi = 3.0) {
  std::uniform_real_distribution<double> ut(0.01 * xi, 0.99 * xi), ur(r_lo, r_hi);
  std::vector<V> xs;
  for (int i = 0; i < n; ++i) xs.push_back(ur(rng) * w(ut(rng)));
  return xs;
}

}  // namespace oracle
