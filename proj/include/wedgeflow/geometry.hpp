// SPDX-License-Identifier: MIT
// include/wedgeflow/geometry.hpp
//
// The wedge S = {x : 0 <= arg(x) <= xi}, its faces, normals and pushing
// vectors, rotation/reflection labels and the angle-derived quantities that
// decide whether the stationary density is a finite exponential sum.
//
// Conventions: F1 is the ray at angle 0, F2 the ray at angle xi. Inward unit
// normals are n1 = (0, 1) and n2 = (sin xi, -cos xi). Pushing vectors are
// v1 = w(delta) / sin(delta) and v2 = w(xi - epsilon) / sin(epsilon), so that
// <v_i, n_i> = 1. The process has drift -mu.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "wedgeflow/errors.hpp"

namespace wedgeflow {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

using Vec2d = Vec2<double>;
using Mat2d = Mat2<double>;

/// Absolute tolerance for angle comparisons (radians).
inline constexpr double kAngleTol = 1e-9;

template <typename Scalar>
constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

/// w(theta) = (cos theta, sin theta).
template <typename Scalar>
Vec2<Scalar> unit_vector(Scalar theta) {
  using std::cos;
  using std::sin;
  return Vec2<Scalar>(cos(theta), sin(theta));
}

/// rho_theta, anticlockwise rotation over theta.
template <typename Scalar>
Mat2<Scalar> rotation_matrix(Scalar theta) {
  using std::cos;
  using std::sin;
  Mat2<Scalar> m;
  m << cos(theta), -sin(theta), sin(theta), cos(theta);
  return m;
}

/// R_theta, reflection across the line through the origin at angle theta.
template <typename Scalar>
Mat2<Scalar> reflection_matrix(Scalar theta) {
  using std::cos;
  using std::sin;
  Mat2<Scalar> m;
  m << cos(2 * theta), sin(2 * theta), sin(2 * theta), -cos(2 * theta);
  return m;
}

/// Reduce an angle into [lo, lo + period).
template <typename Scalar>
Scalar wrap_angle(Scalar angle, Scalar period, Scalar lo) {
  using std::floor;
  return angle - period * floor((angle - lo) / period);
}

/// Distance between two angles on a circle of the given period.
template <typename Scalar>
Scalar angle_distance(Scalar a, Scalar b, Scalar period) {
  using std::abs;
  const Scalar d = wrap_angle<Scalar>(a - b, period, Scalar(0));
  return std::min(d, period - d);
}

enum class LabelKind { rotation, reflection };

inline const char* to_string(LabelKind k) {
  return k == LabelKind::rotation ? "rotation" : "reflection";
}

/// A 2x2 orthogonal matrix identified by kind and angle: Rotation(a) is
/// rho_a, Reflection(a) is R_a. Entries are computed from the angle on
/// demand, never from accumulated products.
template <typename Scalar>
class LabelMatrix {
 public:
  LabelMatrix() = default;

  static LabelMatrix rotation(Scalar angle) { return {LabelKind::rotation, angle}; }
  static LabelMatrix reflection(Scalar angle) { return {LabelKind::reflection, angle}; }

  LabelKind kind() const { return kind_; }
  Scalar angle() const { return angle_; }
  bool is_rotation() const { return kind_ == LabelKind::rotation; }

  /// Rotation angle in (-pi, pi], or reflection-line angle in [0, pi).
  Scalar canonical_angle() const {
    if (is_rotation()) {
      Scalar a = wrap_angle<Scalar>(angle_, 2 * pi_v<Scalar>, -pi_v<Scalar>);
      return a == -pi_v<Scalar> ? pi_v<Scalar> : a;
    }
    return wrap_angle<Scalar>(angle_, pi_v<Scalar>, Scalar(0));
  }

  /// Signature: +1 for rotations, -1 for reflections.
  int sign() const { return is_rotation() ? 1 : -1; }

  Mat2<Scalar> matrix() const {
    return is_rotation() ? rotation_matrix(angle_) : reflection_matrix(angle_);
  }

  /// Group product, kept symbolic.
  LabelMatrix operator*(const LabelMatrix& rhs) const {
    if (is_rotation() && rhs.is_rotation()) return rotation(angle_ + rhs.angle_);
    if (is_rotation()) return reflection(rhs.angle_ + angle_ / 2);
    if (rhs.is_rotation()) return reflection(angle_ - rhs.angle_ / 2);
    return rotation(2 * (angle_ - rhs.angle_));
  }

  /// Equality as matrices, comparing angles modulo 2 pi (rotations) or pi
  /// (reflection lines).
  bool same_as(const LabelMatrix& other, Scalar tol = Scalar(kAngleTol)) const {
    if (kind_ != other.kind_) return false;
    const Scalar period = is_rotation() ? 2 * pi_v<Scalar> : pi_v<Scalar>;
    return angle_distance(angle_, other.angle_, period) <= tol;
  }

 private:
  LabelMatrix(LabelKind kind, Scalar angle) : kind_(kind), angle_(angle) {}

  LabelKind kind_ = LabelKind::rotation;
  Scalar angle_ = 0;
};

using LabelMatrixd = LabelMatrix<double>;

enum class Face { F1, F2 };

inline const char* to_string(Face f) { return f == Face::F1 ? "F1" : "F2"; }

template <typename Scalar>
struct WedgeGeometry {
  Scalar xi = 0;
  Scalar delta = 0;
  Scalar epsilon = 0;
  Vec2<Scalar> n1 = Vec2<Scalar>::Zero();
  Vec2<Scalar> n2 = Vec2<Scalar>::Zero();
  Vec2<Scalar> v1 = Vec2<Scalar>::Zero();
  Vec2<Scalar> v2 = Vec2<Scalar>::Zero();
  Scalar alpha = 0;

  /// alpha < 1 is needed for the reflected process to exist.
  bool defines_srbm() const { return alpha < 1; }

  const Vec2<Scalar>& normal(Face f) const { return f == Face::F1 ? n1 : n2; }
  const Vec2<Scalar>& push(Face f) const { return f == Face::F1 ? v1 : v2; }
  /// v_i^* = 2 n_i - v_i, the direction in the adjoint boundary condition.
  Vec2<Scalar> dual_push(Face f) const { return 2 * normal(f) - push(f); }
  /// Unit vector along the face ray.
  Vec2<Scalar> face_direction(Face f) const {
    return unit_vector<Scalar>(f == Face::F1 ? Scalar(0) : xi);
  }

  bool contains(const Vec2<Scalar>& x, Scalar tol = 0) const {
    return n1.dot(x) >= -tol && n2.dot(x) >= -tol;
  }
  bool interior_contains(const Vec2<Scalar>& x) const {
    return n1.dot(x) > 0 && n2.dot(x) > 0;
  }
};

using WedgeGeometryd = WedgeGeometry<double>;

/// Builds the wedge. Throws DomainError for angles outside (0, pi) and
/// DegeneratePushingError when sin(delta) or sin(epsilon) is below 1e-12.
template <typename Scalar>
WedgeGeometry<Scalar> make_wedge(Scalar xi, Scalar delta, Scalar epsilon) {
  using std::abs;
  using std::isfinite;
  using std::sin;
  const Scalar pi = pi_v<Scalar>;
  auto in_range = [&](Scalar a) { return isfinite(a) && a > 0 && a < pi; };
  if (!in_range(xi) || !in_range(delta) || !in_range(epsilon)) {
    throw DomainError("wedge angles must lie in (0, pi)");
  }
  if (abs(sin(delta)) < Scalar(1e-12) || abs(sin(epsilon)) < Scalar(1e-12)) {
    throw DegeneratePushingError("pushing direction is (nearly) tangent to its face");
  }
  WedgeGeometry<Scalar> g;
  g.xi = xi;
  g.delta = delta;
  g.epsilon = epsilon;
  g.n1 = Vec2<Scalar>(0, 1);
  g.n2 = Vec2<Scalar>(sin(xi), -std::cos(xi));
  g.v1 = unit_vector(delta) / sin(delta);
  g.v2 = unit_vector(xi - epsilon) / sin(epsilon);
  g.alpha = (delta + epsilon - pi) / xi;
  return g;
}

template <typename Scalar>
struct Drift {
  Vec2<Scalar> mu = Vec2<Scalar>::Zero();
  Scalar theta_mu = 0;  ///< arg(mu) in (-pi, pi]

  Scalar norm() const { return mu.norm(); }
};

using Driftd = Drift<double>;

template <typename Scalar>
Drift<Scalar> make_drift(const Vec2<Scalar>& mu) {
  using std::atan2;
  using std::isfinite;
  const Scalar n2 = mu.squaredNorm();
  if (!mu.allFinite() || n2 == 0 || !isfinite(n2)) {
    throw DomainError("drift vector must be finite and nonzero");
  }
  Drift<Scalar> d;
  d.mu = mu;
  d.theta_mu = atan2(mu.y(), mu.x());
  return d;
}

template <typename Scalar>
Drift<Scalar> make_drift_polar(Scalar norm, Scalar theta) {
  return make_drift<Scalar>(norm * unit_vector(theta));
}

// Label families. Rot_k = rho_{2 delta + 2 k xi};
// Ref_k = rho_{2 delta + 2 (k-1) xi} R_xi = R_{delta + k xi}.
// The tilde variants are the clockwise counterparts starting from -2 epsilon.

template <typename Scalar>
LabelMatrix<Scalar> rot_k(const WedgeGeometry<Scalar>& g, int k) {
  return LabelMatrix<Scalar>::rotation(2 * g.delta + 2 * k * g.xi);
}

template <typename Scalar>
LabelMatrix<Scalar> ref_k(const WedgeGeometry<Scalar>& g, int k) {
  return LabelMatrix<Scalar>::reflection(g.delta + k * g.xi);
}

template <typename Scalar>
LabelMatrix<Scalar> tilde_rot_k(const WedgeGeometry<Scalar>& g, int k) {
  return LabelMatrix<Scalar>::rotation(-2 * k * g.xi - 2 * g.epsilon);
}

/// rho_{-2(k-1) xi - 2 epsilon} R_0 = R_{-(k-1) xi - epsilon}.
template <typename Scalar>
LabelMatrix<Scalar> tilde_ref_k(const WedgeGeometry<Scalar>& g, int k) {
  return LabelMatrix<Scalar>::reflection(-(k - 1) * g.xi - g.epsilon);
}

/// l such that alpha = -l, when |alpha + l| <= tol for a nonnegative integer.
template <typename Scalar>
std::optional<int> ell_of_alpha(const WedgeGeometry<Scalar>& g,
                                Scalar tol = Scalar(kAngleTol)) {
  using std::abs;
  using std::round;
  const Scalar nearest = round(-g.alpha);
  if (nearest < 0 || abs(g.alpha + nearest) > tol) return std::nullopt;
  return static_cast<int>(nearest);
}

enum class DriftClass { unstable, stable_only, in_theta_ell };

inline const char* to_string(DriftClass c) {
  switch (c) {
    case DriftClass::unstable: return "unstable";
    case DriftClass::stable_only: return "stable_only";
    case DriftClass::in_theta_ell: return "in_theta_ell";
  }
  return "?";
}

/// Positive recurrence needs xi - epsilon < theta_mu < delta.
template <typename Scalar>
bool is_stable(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d) {
  return g.xi - g.epsilon < d.theta_mu && d.theta_mu < g.delta;
}

/// Classifies theta_mu against the stability interval and the excluded set
/// {theta : sin(theta - 2 delta - k xi) = 0, k = 0..2l}.
template <typename Scalar>
DriftClass drift_admissible(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d,
                            int ell, Scalar tol = Scalar(kAngleTol)) {
  using std::abs;
  using std::sin;
  if (!is_stable(g, d)) return DriftClass::unstable;
  for (int k = 0; k <= 2 * ell; ++k) {
    if (abs(sin(d.theta_mu - 2 * g.delta - k * g.xi)) <= tol) {
      return DriftClass::stable_only;
    }
  }
  return DriftClass::in_theta_ell;
}

}  // namespace wedgeflow
