// SPDX-License-Identifier: MIT
// include/wedgeflow/validate.hpp
//
// Full validation of the closed-form density for one (wedge, drift) pair,
// and text/CSV report writers used by the CLI.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wedgeflow/exp_sum.hpp"
#include "wedgeflow/geometry.hpp"

namespace wedgeflow {

struct ValidationTolerances {
  double pde = 1e-10;            ///< scaled interior residual
  double bc = 1e-10;             ///< scaled boundary residual
  double bar_floor = 1e-8;       ///< BAR passes below max(floor, 10 x quadrature error)
  double fd_agreement = 1e-4;    ///< analytic vs finite-difference residual (unit-mass density)
  double corner_spread = 1e-2;   ///< relative spread of C over the angle grid
};

struct ValidationOptions {
  ValidationTolerances tol;
  int interior_points = 1000;
  int face_points = 200;
  int bar_lambdas = 20;
  PolarGrid sign_grid;
  double perturb_coefficient = 0;  ///< relative change applied to one coefficient
  int perturb_term = 0;
};

struct ValidationReport {
  int ell = 0;
  std::size_t terms = 0;
  double pde_residual_max = 0;
  double pde_fd_residual_max = 0;
  double bc1_residual_max = 0;
  double bc2_residual_max = 0;
  double bar_residual_max = 0;
  double bar_tolerance = 0;
  double quadrature_error = 0;
  bool sign_change_found = false;
  bool corner_checked = false;
  double corner_slope = 0;
  double corner_slope_tolerance = 0;
  double corner_spread = 0;
  ValidationTolerances tolerances;
  bool passed = false;

  /// Names of the checks that failed.
  std::vector<std::string> failures() const;
};

/// Builds the expanded density and runs every check. Construction errors
/// (alpha, stability, excluded drift) propagate as exceptions.
ValidationReport validate(const WedgeGeometryd& g, const Driftd& d,
                          const ValidationOptions& opts = {});

/// Human-readable summary followed by key=value lines.
void write_report(std::ostream& os, const ValidationReport& r);

/// CSV with header coeff,d_x,d_y,label_kind,label_angle.
void write_terms_csv(std::ostream& os, const SumOfExponentialsd& sum);

/// CSV with header theta,r,density,normalized_density on an n_theta x n_r
/// polar grid over [0, xi] x (0, r_max].
void write_grid_csv(std::ostream& os, const SumOfExponentialsd& sum, double normalizing_constant,
                    const PolarGrid& grid);

}  // namespace wedgeflow
