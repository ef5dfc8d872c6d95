// SPDX-License-Identifier: MIT
// include/wedgeflow/config.hpp
//
// Flat key=value run configuration. Blank lines and lines starting with '#'
// are ignored. Angles accept plain radians or literals such as "pi/3",
// "2*pi/5", "-pi/12".

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "wedgeflow/geometry.hpp"
#include "wedgeflow/reflection_sim.hpp"

namespace wedgeflow {

struct RunConfig {
  // geometry and drift
  double xi = 0;
  double delta = 0;
  double epsilon = 0;
  Vec2d mu = Vec2d::Zero();

  // density grid
  int grid_theta = 100;
  int grid_r = 100;
  double grid_rmax = 0;  ///< 0 picks a radius from the slowest decay rate

  // validation tolerances
  double tol_pde = 1e-10;
  double tol_bc = 1e-10;
  double tol_bar = 1e-8;          ///< floor; the check also allows 10x the quadrature error
  double tol_corner_spread = 1e-2;
  double perturb_coefficient = 0; ///< test hook: relative change of one coefficient
  int perturb_term = 0;

  // simulation
  SimConfig sim;
  int hist_theta = 64;
  int hist_r = 128;
  double hist_rmax = 0;   ///< 0 picks the radius with closed-form tail mass 1e-4
  double l1_tolerance = 0; ///< > 0 turns the simulate comparison into a pass/fail check

  // survival and duality
  Vec2d point = Vec2d(1, 1);
  double horizon = 50;

  bool operator==(const RunConfig&) const = default;
};

/// Parses an angle literal: a number, or [sign][p][*]pi[/q].
double parse_angle(const std::string& text);

/// Parses "a, b" into a 2-vector.
Vec2d parse_vec2(const std::string& text);

/// Throws DomainError on unknown keys, malformed values or invalid angles.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Renders every key with 17 significant digits; parse_config inverts it.
std::string render_config(const RunConfig& cfg);

/// Formats a double with 17 significant digits and '.' as decimal point.
std::string format_double(double v);

}  // namespace wedgeflow
