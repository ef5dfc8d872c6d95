// SPDX-License-Identifier: MIT
// include/wedgeflow/validation.hpp
//
// Residual checks for candidate densities: the interior PDE
// Delta p + 2 <mu, grad p> = 0, the oblique boundary conditions
// <v_i^*, grad p> + 2 <mu, n_i> p = 0, the Laplace-transform form of the
// basic adjoint relationship, and the label path produced by mating terms
// across the two faces.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wedgeflow/density.hpp"
#include "wedgeflow/errors.hpp"
#include "wedgeflow/exp_sum.hpp"
#include "wedgeflow/geometry.hpp"
#include "wedgeflow/quadrature.hpp"

namespace wedgeflow {

/// Largest absolute residual, and largest residual divided by the local
/// magnitude of the terms it is built from.
template <typename Scalar>
struct Residual {
  Scalar max_abs = 0;
  Scalar max_scaled = 0;

  void add(Scalar value, Scalar scale) {
    using std::abs;
    max_abs = std::max(max_abs, abs(value));
    if (scale > 0) max_scaled = std::max(max_scaled, abs(value) / scale);
  }
};

/// Analytic residual sum_i a_i e^{-<d_i,x>} (|d_i|^2 - 2 <mu, d_i>).
template <typename Scalar>
Residual<Scalar> pde_residual(const SumOfExponentials<Scalar>& sum, const Drift<Scalar>& d,
                              const std::vector<Vec2<Scalar>>& xs) {
  using std::abs;
  Residual<Scalar> out;
  for (const auto& x : xs) {
    Scalar value = 0, scale = 0;
    for (const auto& t : sum.terms) {
      const Scalar e = t.coeff * detail::decay_factor(t.exponent.dot(x));
      value += e * (t.exponent.squaredNorm() - 2 * d.mu.dot(t.exponent));
      scale += abs(e) * (t.exponent.squaredNorm() + 2 * abs(d.mu.dot(t.exponent)));
    }
    out.add(value, scale);
  }
  return out;
}

/// Same residual from central differences of eval with step h.
template <typename Scalar>
Residual<Scalar> pde_residual_fd(const SumOfExponentials<Scalar>& sum, const Drift<Scalar>& d,
                                 const std::vector<Vec2<Scalar>>& xs, Scalar h = Scalar(1e-5)) {
  Residual<Scalar> out;
  const Vec2<Scalar> ex(h, 0), ey(0, h);
  for (const auto& x : xs) {
    const Scalar f0 = eval(sum, x);
    const Scalar fxp = eval(sum, Vec2<Scalar>(x + ex)), fxm = eval(sum, Vec2<Scalar>(x - ex));
    const Scalar fyp = eval(sum, Vec2<Scalar>(x + ey)), fym = eval(sum, Vec2<Scalar>(x - ey));
    const Scalar lap = (fxp + fxm + fyp + fym - 4 * f0) / (h * h);
    const Vec2<Scalar> grad((fxp - fxm) / (2 * h), (fyp - fym) / (2 * h));
    out.add(lap + 2 * d.mu.dot(grad), Scalar(0));
  }
  return out;
}

/// <v^*, grad p(x)> + 2 <mu, n> p(x) at x = s w_face, with v^* = 2n - v.
template <typename Scalar>
Residual<Scalar> bc_residual(const SumOfExponentials<Scalar>& sum, const Drift<Scalar>& d,
                             const WedgeGeometry<Scalar>& g, Face face,
                             const std::vector<Scalar>& ss) {
  using std::abs;
  const Vec2<Scalar> vstar = g.dual_push(face);
  const Scalar mu_n = 2 * d.mu.dot(g.normal(face));
  const Vec2<Scalar> w = g.face_direction(face);
  Residual<Scalar> out;
  for (Scalar s : ss) {
    const Vec2<Scalar> x = s * w;
    Scalar value = 0, scale = 0;
    for (const auto& t : sum.terms) {
      const Scalar e = t.coeff * detail::decay_factor(t.exponent.dot(x));
      value += e * (mu_n - vstar.dot(t.exponent));
      scale += abs(e) * (abs(mu_n) + abs(vstar.dot(t.exponent)));
    }
    out.add(value, scale);
  }
  return out;
}

/// n points spread geometrically over [1e-3, 20] along a face.
template <typename Scalar>
std::vector<Scalar> face_samples(int n, Scalar lo = Scalar(1e-3), Scalar hi = Scalar(20)) {
  using std::pow;
  std::vector<Scalar> ss(n);
  for (int i = 0; i < n; ++i) ss[i] = lo * pow(hi / lo, n == 1 ? Scalar(0) : Scalar(i) / (n - 1));
  return ss;
}

/// The two-term sum p_gamma (F1) or its clockwise analogue (F2). For F1 the
/// labels are rho_{2 gamma + 2 delta} and rho_{2 gamma + 2 delta} R_0; for F2
/// they are rho_{-2 gamma - 2 epsilon} and rho_{-2 gamma - 2 epsilon} R_xi.
template <typename Scalar>
SumOfExponentials<Scalar> pair_sum(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d,
                                   Scalar gamma, Face face) {
  using std::abs;
  const bool f1 = face == Face::F1;
  const auto rot = LabelMatrix<Scalar>::rotation(f1 ? 2 * gamma + 2 * g.delta
                                                    : -2 * gamma - 2 * g.epsilon);
  const auto ref = rot * LabelMatrix<Scalar>::reflection(f1 ? Scalar(0) : g.xi);
  const Vec2<Scalar>& v = g.push(face);
  const Scalar a_ref = label_inner(d.mu, ref, v);
  if (abs(a_ref) <= Scalar(1e-12) * d.mu.squaredNorm() * v.norm()) {
    throw DegeneratePairError("pair coefficient <mu, (I - M) v> vanishes");
  }
  SumOfExponentials<Scalar> s;
  s.geometry = g;
  s.drift = d;
  s.terms.push_back(make_term(label_inner(d.mu, rot, v), d.mu, rot));
  s.terms.push_back(make_term(-a_ref, d.mu, ref));
  return s;
}

template <typename Scalar>
struct PairCheck {
  SumOfExponentials<Scalar> sum;
  Residual<Scalar> bc;
  bool passed = false;
};

/// Builds the pair for gamma in (0, pi) and checks its boundary condition
/// on the matching face.
template <typename Scalar>
PairCheck<Scalar> pair_check(const WedgeGeometry<Scalar>& g, const Drift<Scalar>& d, Scalar gamma,
                             Face face, Scalar tol = Scalar(1e-10)) {
  if (!(gamma > 0 && gamma < pi_v<Scalar>)) throw DomainError("gamma must lie in (0, pi)");
  PairCheck<Scalar> out;
  out.sum = pair_sum(g, d, gamma, face);
  out.bc = bc_residual(out.sum, d, g, face, face_samples<Scalar>(50));
  out.passed = out.bc.max_scaled <= tol;
  return out;
}

template <typename Scalar>
bool in_dual_cone(const WedgeGeometry<Scalar>& g, const Vec2<Scalar>& lambda) {
  return lambda.squaredNorm() > 0 && lambda.x() >= 0 &&
         lambda.dot(unit_vector(g.xi)) >= 0;
}

template <typename Scalar>
struct BarResult {
  Scalar max_residual = 0;
  Scalar max_error_estimate = 0;  ///< largest fine-vs-coarse difference of the area term
};

/// Residual of
///   [|l|^2/2 + <mu,l>] int_S e^{-<l,x>} p dx
///   - <v1,l> int_F1 e^{-<l,x>} p/2 ds - <v2,l> int_F2 e^{-<l,x>} p/2 ds
/// for each lambda in the dual cone.
template <typename Scalar>
BarResult<Scalar> bar_check(const NormalizedDensity<Scalar>& den, const Drift<Scalar>& d,
                            const std::vector<Vec2<Scalar>>& lambdas,
                            const QuadratureSpec& quad = {}) {
  using std::abs;
  const auto& g = den.sum.geometry;
  const auto fine = gauss_legendre<Scalar>(quad.nodes);
  const auto coarse = gauss_legendre<Scalar>(quad.coarse_nodes);
  BarResult<Scalar> out;
  for (const auto& lambda : lambdas) {
    if (!in_dual_cone(g, lambda)) throw PreconditionError("lambda outside the dual cone");
    const Scalar gen = lambda.squaredNorm() / 2 + d.mu.dot(lambda);
    const Scalar area = wedge_integral(den.sum, fine, lambda);
    const Scalar area_coarse = wedge_integral(den.sum, coarse, lambda);
    const Scalar faces = g.v1.dot(lambda) * face_integral(den.sum, Face::F1, lambda) / 2 +
                         g.v2.dot(lambda) * face_integral(den.sum, Face::F2, lambda) / 2;
    out.max_residual = std::max(out.max_residual, abs(gen * area - faces));
    out.max_error_estimate = std::max(out.max_error_estimate, abs(gen * (area - area_coarse)));
  }
  return out;
}

/// For lambda = t n_face, the ratio of the area term to the face term of the
/// relationship; it tends to 1 as t grows when the boundary measure on that
/// face is p/2 times arc length.
template <typename Scalar>
Scalar bar_face_limit_ratio(const NormalizedDensity<Scalar>& den, const Drift<Scalar>& d,
                            Face face, Scalar t) {
  const auto& g = den.sum.geometry;
  const Vec2<Scalar> lambda = t * g.normal(face);
  const Scalar gen = lambda.squaredNorm() / 2 + d.mu.dot(lambda);
  const Scalar area = wedge_integral_graded(den.sum, lambda);
  const Face other = face == Face::F1 ? Face::F2 : Face::F1;
  const Scalar far_face = g.push(other).dot(lambda) * face_integral(den.sum, other, lambda) / 2;
  const Scalar near_face = g.push(face).dot(lambda) * face_integral(den.sum, face, lambda) / 2;
  return (gen * area - far_face) / near_face;
}

/// Sign check over a polar grid; see sign_scan.
template <typename Scalar>
bool has_sign_change(const SumOfExponentials<Scalar>& sum, const PolarGrid& grid = {}) {
  return !sign_scan(sum, grid).single_signed;
}

enum class EdgeType { BC1, BC2 };

inline const char* to_string(EdgeType e) { return e == EdgeType::BC1 ? "BC1" : "BC2"; }

template <typename Scalar>
struct MatingPath {
  std::vector<LabelMatrix<Scalar>> labels;
  std::vector<EdgeType> edge_types;  ///< edge_types[i] joins labels[i] and labels[i+1]
  bool closed = false;               ///< reached rho_{-2 epsilon}

  const LabelMatrix<Scalar>& front() const { return labels.front(); }
  const LabelMatrix<Scalar>& back() const { return labels.back(); }
};

using MatingPathd = MatingPath<double>;

/// Walks rho_{2 delta} -BC2- rho_{2 delta} R_xi -BC1- rho_{2 delta + 2 xi} -BC2- ...
/// until the current rotation equals rho_{-2 epsilon} or max_len labels
/// have been produced.
template <typename Scalar>
MatingPath<Scalar> mating_path(const WedgeGeometry<Scalar>& g, int max_len) {
  if (max_len < 1) throw DomainError("max_len must be at least 1");
  const auto target = LabelMatrix<Scalar>::rotation(-2 * g.epsilon);
  const auto r_xi = LabelMatrix<Scalar>::reflection(g.xi);
  const auto step = LabelMatrix<Scalar>::rotation(2 * g.xi);
  MatingPath<Scalar> path;
  auto current = LabelMatrix<Scalar>::rotation(2 * g.delta);
  path.labels.push_back(current);
  while (true) {
    if (current.same_as(target)) {
      path.closed = true;
      break;
    }
    if (static_cast<int>(path.labels.size()) + 2 > max_len) break;
    path.labels.push_back(current * r_xi);
    path.edge_types.push_back(EdgeType::BC2);
    current = step * current;
    path.labels.push_back(current);
    path.edge_types.push_back(EdgeType::BC1);
  }
  return path;
}

/// True iff no reflection label on the path has its line meeting the open
/// wedge and none equals R_0 or R_xi.
template <typename Scalar>
bool range_restriction_check(const MatingPath<Scalar>& path, const WedgeGeometry<Scalar>& g,
                             Scalar tol = Scalar(kAngleTol)) {
  const auto r0 = LabelMatrix<Scalar>::reflection(0);
  const auto rxi = LabelMatrix<Scalar>::reflection(g.xi);
  for (const auto& m : path.labels) {
    if (m.is_rotation()) continue;
    if (m.same_as(r0, tol) || m.same_as(rxi, tol)) return false;
    const Scalar line = m.canonical_angle();
    if (line > tol && line < g.xi - tol) return false;
  }
  return true;
}

/// Largest mismatch of the shared exponent component along path edges:
/// BC1 edges share <d, w_0>, BC2 edges share <d, w_xi>.
template <typename Scalar>
Scalar edge_pairing_defect(const MatingPath<Scalar>& path, const Drift<Scalar>& d,
                           const WedgeGeometry<Scalar>& g) {
  using std::abs;
  Scalar worst = 0;
  const Vec2<Scalar> w0 = unit_vector(Scalar(0)), wxi = unit_vector(g.xi);
  for (std::size_t i = 0; i < path.edge_types.size(); ++i) {
    const Vec2<Scalar> a = label_exponent(d.mu, path.labels[i]);
    const Vec2<Scalar> b = label_exponent(d.mu, path.labels[i + 1]);
    const Vec2<Scalar>& w = path.edge_types[i] == EdgeType::BC1 ? w0 : wxi;
    worst = std::max(worst, abs(a.dot(w) - b.dot(w)));
  }
  return worst;
}

/// Whether two label lists agree as multisets (angles compared up to tol).
template <typename Scalar>
bool same_label_multiset(std::vector<LabelMatrix<Scalar>> a, std::vector<LabelMatrix<Scalar>> b,
                         Scalar tol = Scalar(kAngleTol)) {
  if (a.size() != b.size()) return false;
  for (const auto& m : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const auto& x) { return x.same_as(m, tol); });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace wedgeflow
