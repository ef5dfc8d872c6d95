// SPDX-License-Identifier: MIT
// tests/test_spectral.cpp

#include <doctest.h>

#include <random>

#include "cases.hpp"
#include "oracles.hpp"
#include "wedgeflow/density.hpp"
#include "wedgeflow/spectral.hpp"

using namespace wedgeflow;
using oracle::pi;

namespace {

// I_n(r) = (1/pi) int_0^pi e^{r cos t} cos(n t) dt. The trapezoid rule is
// spectrally accurate for this periodic integrand.
double bessel_oracle(int n, double r) {
  const int m = 400;
  double acc = 0;
  for (int i = 0; i <= m; ++i) {
    const double t = pi * i / m;
    const double wgt = (i == 0 || i == m) ? 0.5 : 1.0;
    acc += wgt * std::exp(r * std::cos(t)) * std::cos(n * t);
  }
  return acc / m;
}

}  // namespace

TEST_CASE("Chebyshev polynomials") {
  CHECK(cheb_U(0, 0.7) == 1);
  CHECK(cheb_U(1, 0.3) == doctest::Approx(0.6));
  CHECK(cheb_U(-1, 0.3) == 0);
  CHECK(cheb_T(2, 0.5) == doctest::Approx(-0.5));
  for (double t : {0.1, 0.7, 1.3, 2.9}) {
    for (int n = 0; n < 12; ++n) {
      CHECK(cheb_T(n, std::cos(t)) == doctest::Approx(std::cos(n * t)).epsilon(1e-12));
      CHECK(cheb_U(n, std::cos(t)) == doctest::Approx(std::sin((n + 1) * t) / std::sin(t)).epsilon(1e-11));
    }
  }
  // endpoints are finite: U_n(1) = n + 1, U_n(-1) = (-1)^n (n + 1)
  CHECK(cheb_U(5, 1.0) == 6);
  CHECK(cheb_U(5, -1.0) == -6);
}

TEST_CASE("modified Bessel functions") {
  for (int n : {0, 1, 2, 3, 7}) {
    for (double r : {0.0, 0.05, 0.5, 2.0, 10.0}) {
      CHECK(bessel_I(n, r) == doctest::Approx(bessel_oracle(n, r)).epsilon(1e-13));
    }
  }
  // leading behaviour I_l(r) / r^l -> 1 / (2^l l!)
  CHECK(bessel_I(3, 1e-4) / 1e-12 == doctest::Approx(1.0 / 48).epsilon(1e-8));
}

TEST_CASE("h_jn at theta = 0, n = 1") {
  const auto g = make_wedge(pi / 3, pi / 3, pi / 3);
  const auto ctx = make_spectral_context(g, make_drift_polar(2.0, pi / 6));
  CHECK(ctx.ell == 1);
  CHECK(ctx.drift.norm() == doctest::Approx(1));
  for (int j = 0; j <= 1; ++j)
    CHECK(h_jn(ctx, j, 1, 0.0) == doctest::Approx(std::sin(g.delta) * ctx.zeta(j)).epsilon(1e-14));
}

TEST_CASE("Bessel expansion matches direct evaluation of pi_j") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ur(0.0, 0.5);
  for (const auto& c : cases::all()) {
    const auto g = c.geometry();
    const auto d = cases::random_drift(c, rng);
    const auto ctx = make_spectral_context(g, d);
    std::uniform_real_distribution<double> ut(0.0, g.xi);
    for (int j = 0; j <= c.ell; ++j) {
      const auto pj = pi_j(g, ctx.drift, j);
      for (double r : {0.1, ur(rng), ur(rng), 0.5}) {
        const double t = ut(rng);
        const Vec2d x = r * oracle::w(t);
        const double direct = std::exp(ctx.drift.mu.dot(x)) * eval(pj, x);
        CHECK(std::abs(bessel_expansion(ctx, j, r, t) - direct) <= 1e-10);
      }
    }
  }
}

TEST_CASE("corner coefficient: vanishing below l, proportional at l") {
  std::mt19937_64 rng(22);
  for (int ell = 0; ell <= 3; ++ell) {
    for (const auto& c : cases::with_ell(ell)) {
      const auto g = c.geometry();
      const auto ctx = make_spectral_context(g, cases::random_drift(c, rng));
      REQUIRE(ctx.ell == ell);
      std::uniform_real_distribution<double> ut(0.0, g.xi);
      std::vector<double> ratio;
      for (int i = 0; i < 20; ++i) {
        const double t = ut(rng);
        const double lead = corner_coefficient(ctx, std::max(ell, 1), t);
        for (int n = 1; n < ell; ++n) CHECK(std::abs(corner_coefficient(ctx, n, t)) <= 1e-10 * std::abs(lead));
        const double shape = std::sin(ell * t + g.delta);
        if (ell >= 1 && std::abs(shape) > 0.05) ratio.push_back(lead / shape);
        if (ell == 0) CHECK(corner_coefficient(ctx, 1, t) == doctest::Approx(h_jn(ctx, 0, 1, t)));
      }
      if (ell >= 1) CHECK(oracle::relative_spread(ratio) <= 1e-8);
    }
  }
}

TEST_CASE("corner coefficient: U rows and power rows differ by 2^{l(l-1)/2}") {
  std::mt19937_64 rng(23);
  for (const auto& c : cases::all()) {
    const auto g = c.geometry();
    const auto ctx = make_spectral_context(g, cases::random_drift(c, rng));
    const double factor = std::pow(2.0, c.ell * (c.ell - 1) / 2);
    for (int n = 1; n <= c.ell + 3; ++n) {
      for (double t : {0.1 * g.xi, 0.5 * g.xi, 0.9 * g.xi}) {
        const double u = corner_coefficient(ctx, n, t);
        const double p = corner_coefficient_power_rows(ctx, n, t);
        const double scale = std::abs(corner_coefficient(ctx, std::max(c.ell, 1), t)) + 1e-300;
        const bool u_zero = std::abs(u) <= 1e-10 * scale, p_zero = std::abs(p) * factor <= 1e-10 * scale;
        CHECK(u_zero == p_zero);
        CHECK(std::abs(u - factor * p) <= 1e-10 * std::max(scale, std::abs(u)));
      }
    }
  }
}

TEST_CASE("corner limit") {
  std::mt19937_64 rng(24);
  SUBCASE("l = 1 and l = 2 slopes, C spread") {
    for (int ell : {1, 2}) {
      for (const auto& c : cases::with_ell(ell)) {
        const auto g = c.geometry();
        const auto d = cases::random_drift(c, rng);
        std::vector<double> cs;
        for (int i = 0; i < 9; ++i) {
          const double t = (i + 0.5) / 9 * g.xi;
          if (std::abs(std::sin(ell * t + g.delta)) < 1e-3) continue;
          const auto fit = corner_limit(g, d, t);
          CHECK(std::abs(fit.slope - ell) <= (ell == 1 ? 1e-3 : 1e-2));
          cs.push_back(fit.constant);
        }
        CHECK(oracle::relative_spread(cs) <= 1e-2);
        CHECK(std::abs(cs.front()) > 0);
      }
    }
  }
  SUBCASE("zero of the angular factor") {
    const auto c = cases::with_ell(1)[0];
    const auto g = c.geometry();
    CHECK_THROWS_AS(corner_limit(g, cases::random_drift(c, rng), pi - g.delta), DomainError);
  }
  SUBCASE("l = 0 density at the vertex is its coefficient sum") {
    const auto c = cases::with_ell(0)[1];
    const auto s = density_expanded(c.geometry(), cases::random_drift(c, rng));
    REQUIRE(s.size() == 1);
    CHECK(eval(s, Vec2d(0, 0)) == doctest::Approx(s.terms[0].coeff));
  }
}

TEST_CASE("Schur sign determinant") {
  CHECK(schur_sign_det<double>({2, 1}, 1.0) == doctest::Approx(std::exp(2.0) - std::exp(1.0)));
  CHECK(schur_sign_det<double>({1, 2}, 1.0) < 0);
  CHECK(vandermonde_sign<double>({1, 2}) == -1);
  CHECK(vandermonde_sign<double>({1, 1, 3}) == 0);
  CHECK_THROWS_AS(schur_sign_det<double>({1, 2}, 0.0), DomainError);

  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> uz(-1, 1), uy(0.2, 3);
  auto sign = [](double v) { return (v > 0) - (v < 0); };
  for (int ell = 1; ell <= 3; ++ell) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> z(ell + 1);
      for (auto& v : z) v = uz(rng);
      const double y = uy(rng);
      CHECK(sign(schur_sign_det(z, y)) == oracle::product_sign(z));
      CHECK(vandermonde_sign(z) == oracle::product_sign(z));
      // near tie
      z[1] = z[0] + (trial % 2 ? 1e-6 : -1e-6);
      CHECK(sign(schur_sign_det(z, y)) == oracle::product_sign(z));
    }
  }
}

TEST_CASE("zeta values are distinct for admissible drifts") {
  std::mt19937_64 rng(26);
  for (const auto& c : cases::all()) {
    const auto ctx = make_spectral_context(c.geometry(), cases::random_drift(c, rng));
    const auto z = ctx.zetas();
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j) CHECK(std::abs(z[i] - z[j]) > 1e-6);
    for (int j = 0; j <= c.ell; ++j)
      CHECK(ctx.zeta(j) == doctest::Approx(ctx.drift.mu.dot(c.oracle_wedge().rot(j).col(0))).epsilon(1e-12));
  }
}
