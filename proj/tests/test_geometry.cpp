// SPDX-License-Identifier: MIT
// tests/test_geometry.cpp

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wedgeflow/geometry.hpp"

using namespace wedgeflow;
using oracle::pi;

TEST_CASE("make_wedge: normal reflection in the quarter plane") {
  const auto g = make_wedge(pi / 2, pi / 2, pi / 2);
  CHECK(g.n1.isApprox(Vec2d(0, 1)));
  CHECK((g.n2 - Vec2d(1, 0)).norm() < 1e-15);
  CHECK((g.v1 - Vec2d(0, 1)).norm() < 1e-15);
  CHECK((g.v2 - Vec2d(1, 0)).norm() < 1e-15);
  CHECK(g.alpha == doctest::Approx(0).epsilon(1e-15));
}

TEST_CASE("make_wedge: alpha and pushing-vector lengths") {
  const auto g = make_wedge(pi / 3, pi / 3, pi / 3);
  CHECK(g.alpha == doctest::Approx(-1).epsilon(1e-14));
  CHECK(g.v1.norm() == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(make_wedge(pi / 5, 2 * pi / 5, 2 * pi / 5).alpha == doctest::Approx(-1).epsilon(1e-14));
}

TEST_CASE("make_wedge: invariants on random angles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, pi - 0.05);
  for (int i = 0; i < 200; ++i) {
    const double xi = u(rng), delta = u(rng), eps = u(rng);
    const auto g = make_wedge(xi, delta, eps);
    CHECK(g.v1.dot(g.n1) == doctest::Approx(1).epsilon(1e-12));
    CHECK(g.v2.dot(g.n2) == doctest::Approx(1).epsilon(1e-12));
    CHECK(std::atan2(g.v1.y(), g.v1.x()) == doctest::Approx(delta).epsilon(1e-12));
    CHECK(std::abs(g.n1.norm() - 1) < 1e-15);
    CHECK(std::abs(g.n2.norm() - 1) < 1e-15);
    // normals point into the wedge
    CHECK(g.interior_contains(oracle::w(xi / 2)));
    // faces lie on the boundary
    CHECK(std::abs(g.n1.dot(oracle::w(0))) < 1e-15);
    CHECK(std::abs(g.n2.dot(oracle::w(xi))) < 1e-15);
    CHECK(g.alpha == doctest::Approx((delta + eps - pi) / xi));
    CHECK((g.dual_push(Face::F1) - (2 * g.n1 - g.v1)).norm() < 1e-15);
  }
}

TEST_CASE("make_wedge: errors") {
  CHECK_THROWS_AS(make_wedge(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_wedge(1.0, pi, 1.0), DomainError);
  CHECK_THROWS_AS(make_wedge(1.0, 1.0, -0.1), DomainError);
  CHECK_THROWS_AS(make_wedge(1.0, 1e-13, 1.0), DegeneratePushingError);
  CHECK_THROWS_AS(make_wedge(1.0, 1.0, pi - 1e-13), DegeneratePushingError);
  CHECK(DomainError("x").code() == ExitCode::usage);
}

TEST_CASE("label matrices: orthogonality, involution, composition") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    const auto ra = LabelMatrixd::rotation(a), rb = LabelMatrixd::rotation(b);
    const auto fa = LabelMatrixd::reflection(a), fb = LabelMatrixd::reflection(b);
    for (const auto& m : {ra, rb, fa, fb}) {
      CHECK((m.matrix().transpose() * m.matrix() - Mat2d::Identity()).norm() <= 1e-14);
    }
    CHECK(oracle::same_matrix(ra.matrix(), oracle::rho(a), 1e-15));
    CHECK(oracle::same_matrix(fa.matrix(), oracle::refl(a), 1e-15));
    CHECK(oracle::same_matrix((fa * fa).matrix(), Mat2d::Identity()));
    // symbolic product agrees with the matrix product
    for (const auto& [x, y] : {std::pair{ra, rb}, {ra, fb}, {fa, rb}, {fa, fb}}) {
      CHECK(oracle::same_matrix((x * y).matrix(), x.matrix() * y.matrix()));
      CHECK((x * y).sign() == x.sign() * y.sign());
    }
    CHECK((ra * rb).same_as(LabelMatrixd::rotation(a + b)));
  }
}

TEST_CASE("label matrices: canonical angle and equality") {
  CHECK(LabelMatrixd::rotation(3 * pi).canonical_angle() == doctest::Approx(pi));
  CHECK(LabelMatrixd::rotation(-pi / 2 + 4 * pi).canonical_angle() == doctest::Approx(-pi / 2));
  CHECK(LabelMatrixd::reflection(-pi / 4).canonical_angle() == doctest::Approx(3 * pi / 4));
  CHECK(LabelMatrixd::reflection(0.3).same_as(LabelMatrixd::reflection(0.3 + pi)));
  CHECK_FALSE(LabelMatrixd::rotation(0.3).same_as(LabelMatrixd::rotation(0.3 + pi)));
  CHECK_FALSE(LabelMatrixd::rotation(0.3).same_as(LabelMatrixd::reflection(0.3)));
}

TEST_CASE("Rot_k / Ref_k families") {
  const auto g = make_wedge(pi / 3, pi / 3, pi / 3);
  CHECK(rot_k(g, 0).same_as(LabelMatrixd::rotation(2 * pi / 3)));
  // with l = 1, Rot_1 coincides with rho_{-2 epsilon}
  CHECK(rot_k(g, 1).same_as(LabelMatrixd::rotation(-2 * pi / 3)));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 50; ++i) {
    const auto h = make_wedge(u(rng), u(rng), u(rng));
    const oracle::Wedge o{h.xi, h.delta, h.epsilon};
    auto acc = LabelMatrixd::rotation(2 * h.delta);
    for (int k = 0; k < 6; ++k) {
      CHECK(oracle::same_matrix(rot_k(h, k).matrix(), o.rot(k), 1e-14));
      CHECK(oracle::same_matrix(rot_k(h, k).matrix(), acc.matrix(), 1e-13));
      CHECK(oracle::same_matrix(ref_k(h, k).matrix(), o.ref(k), 1e-13));
      CHECK(ref_k(h, k + 1).same_as(LabelMatrixd::rotation(2 * h.xi) * ref_k(h, k)));
      CHECK(oracle::same_matrix(tilde_rot_k(h, k).matrix(),
                                oracle::rho(-2 * k * h.xi - 2 * h.epsilon), 1e-13));
      CHECK(oracle::same_matrix(tilde_ref_k(h, k).matrix(),
                                oracle::rho(-2 * (k - 1) * h.xi - 2 * h.epsilon) * oracle::refl(0),
                                1e-13));
      acc = LabelMatrixd::rotation(2 * h.xi) * acc;
    }
    CHECK(oracle::same_matrix((ref_k(h, 0) * ref_k(h, 0)).matrix(), Mat2d::Identity()));
  }
}

TEST_CASE("Rot_l equals rho_{-2 epsilon} when alpha = -l") {
  for (int ell = 0; ell <= 3; ++ell) {
    const double xi = pi / (ell + 3);
    const double delta = 0.6 * (pi - ell * xi);
    const auto g = make_wedge(xi, delta, pi - ell * xi - delta);
    CHECK(oracle::same_matrix(rot_k(g, ell).matrix(), oracle::rho(-2 * g.epsilon), 1e-12));
  }
}

TEST_CASE("ell_of_alpha") {
  CHECK(ell_of_alpha(make_wedge(pi / 2, pi / 2, pi / 2)) == 0);
  CHECK(ell_of_alpha(make_wedge(pi / 4, pi / 4, pi / 4)) == 2);
  // alpha = 0.5
  CHECK_FALSE(ell_of_alpha(make_wedge(pi / 2, 3 * pi / 4, pi / 2)).has_value());
  // alpha = -1.5
  CHECK_FALSE(ell_of_alpha(make_wedge(pi / 3, pi / 4, pi / 4)).has_value());
}

TEST_CASE("drift_admissible") {
  const auto g = make_wedge(pi / 3, pi / 3, pi / 3);
  // theta = pi/6: sin(pi/6 - 2pi/3 - k pi/3) for k = 0, 1, 2 is -1, -1/2, 1/2
  CHECK(drift_admissible(g, make_drift_polar(1.0, pi / 6), 1) == DriftClass::in_theta_ell);
  CHECK(drift_admissible(g, make_drift_polar(1.0, pi / 3), 1) == DriftClass::unstable);
  CHECK(drift_admissible(g, make_drift_polar(1.0, -0.1), 1) == DriftClass::unstable);
  // generic wedge, drift on an excluded direction sin(theta - 2 delta) = 0
  const auto h = make_wedge(pi / 4, 0.6 * pi, 0.4 * pi - pi / 4);
  const double bad = 2 * h.delta - pi;
  REQUIRE(is_stable(h, make_drift_polar(1.0, bad)));
  CHECK(drift_admissible(h, make_drift_polar(1.0, bad), 1) == DriftClass::stable_only);
}

TEST_CASE("make_drift") {
  const auto d = make_drift(Vec2d(1, 1));
  CHECK(d.theta_mu == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(std::abs(std::atan2(d.mu.y(), d.mu.x()) - d.theta_mu) <= 1e-12);
  CHECK_THROWS_AS(make_drift(Vec2d(0, 0)), DomainError);
}
