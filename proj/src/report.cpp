// SPDX-License-Identifier: MIT
// src/report.cpp

#include <ostream>

#include "wedgeflow/config.hpp"
#include "wedgeflow/validate.hpp"

namespace wedgeflow {

void write_report(std::ostream& os, const ValidationReport& r) {
  const auto f = format_double;
  const auto fails = r.failures();
  os << "validation " << (r.passed ? "PASSED" : "FAILED") << " (l = " << r.ell << ", "
     << r.terms << " terms)\n";
  for (const auto& name : fails) os << "  failed: " << name << '\n';
  os << '\n';
  os << "ell=" << r.ell << '\n'
     << "terms=" << r.terms << '\n'
     << "pde_residual_max=" << f(r.pde_residual_max) << '\n'
     << "pde_fd_residual_max=" << f(r.pde_fd_residual_max) << '\n'
     << "bc1_residual_max=" << f(r.bc1_residual_max) << '\n'
     << "bc2_residual_max=" << f(r.bc2_residual_max) << '\n'
     << "bar_residual_max=" << f(r.bar_residual_max) << '\n'
     << "bar_tolerance=" << f(r.bar_tolerance) << '\n'
     << "quadrature_error=" << f(r.quadrature_error) << '\n'
     << "sign_change_found=" << (r.sign_change_found ? "true" : "false") << '\n'
     << "corner_checked=" << (r.corner_checked ? "true" : "false") << '\n'
     << "corner_slope=" << f(r.corner_slope) << '\n'
     << "corner_slope_tolerance=" << f(r.corner_slope_tolerance) << '\n'
     << "corner_spread=" << f(r.corner_spread) << '\n'
     << "tol_pde=" << f(r.tolerances.pde) << '\n'
     << "tol_bc=" << f(r.tolerances.bc) << '\n'
     << "tol_bar_floor=" << f(r.tolerances.bar_floor) << '\n'
     << "tol_fd_agreement=" << f(r.tolerances.fd_agreement) << '\n'
     << "tol_corner_spread=" << f(r.tolerances.corner_spread) << '\n'
     << "passed=" << (r.passed ? "true" : "false") << '\n';
}

void write_terms_csv(std::ostream& os, const SumOfExponentialsd& sum) {
  os << "coeff,d_x,d_y,label_kind,label_angle\n";
  for (const auto& t : sum.terms) {
    os << format_double(t.coeff) << ',' << format_double(t.exponent.x()) << ','
       << format_double(t.exponent.y()) << ',' << to_string(t.label.kind()) << ','
       << format_double(t.label.canonical_angle()) << '\n';
  }
}

void write_grid_csv(std::ostream& os, const SumOfExponentialsd& sum, double normalizing_constant,
                    const PolarGrid& grid) {
  os << "theta,r,density,normalized_density\n";
  const double r_max = resolve_radius(sum, grid);
  const double xi = sum.geometry.xi;
  for (int i = 0; i < grid.n_theta; ++i) {
    const double theta = grid.n_theta == 1 ? xi / 2 : xi * i / (grid.n_theta - 1);
    const Vec2d w = unit_vector(theta);
    for (int j = 1; j <= grid.n_r; ++j) {
      const double r = r_max * j / grid.n_r;
      const double v = eval(sum, Vec2d(r * w));
      os << format_double(theta) << ',' << format_double(r) << ',' << format_double(v) << ','
         << format_double(v * normalizing_constant) << '\n';
    }
  }
}

}  // namespace wedgeflow
