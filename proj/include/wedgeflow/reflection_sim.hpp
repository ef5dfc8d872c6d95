// SPDX-License-Identifier: MIT
// include/wedgeflow/reflection_sim.hpp
//
// Monte Carlo for the reflected process, survival of free Brownian motion
// in the wedge, the dihedral group and its alternating-sum formulas.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wedgeflow/exp_sum.hpp"
#include "wedgeflow/geometry.hpp"
#include "wedgeflow/quadrature.hpp"

namespace wedgeflow {

/// How an Euler step that leaves the wedge is pushed back along v_i.
enum class PushScheme {
  projection,  ///< minimal t >= 0 with <x + t v_i, n_i> = 0
  shifted,     ///< push to <x, n_i> = kBoundaryShift * sigma * sqrt(dt)
  bridge,      ///< push by the local time of each face sampled from the Brownian-bridge minimum
};

/// -zeta(1/2) / sqrt(2 pi): expected overshoot of a Gaussian random walk
/// over a level, in units of the step standard deviation.
inline constexpr double kBoundaryShift = 0.5825971579390106;

const char* to_string(PushScheme s);
PushScheme parse_push_scheme(const std::string& s);

struct SimConfig {
  double dt = 1e-3;
  std::int64_t steps = 100000;  ///< recorded-phase steps per path
  std::int64_t paths = 1;
  std::uint64_t seed = 1;
  Vec2d start = Vec2d(1, 1);
  std::int64_t burn_in = 0;     ///< steps discarded per path
  std::int64_t record_every = 1;
  std::int64_t first_path = 0;  ///< index of the first path (for RNG keying)
  int threads = 0;              ///< 0 picks hardware concurrency
  double diffusion = 1.0;       ///< noise scale; 0 gives the pure-drift variant
  PushScheme scheme = PushScheme::bridge;

  bool operator==(const SimConfig&) const = default;
};

/// Polar histogram on [0, xi] x [0, r_max].
struct PolarHistogram {
  double xi = 0;
  double r_max = 0;
  int n_theta = 64;
  int n_r = 128;
  std::vector<std::uint64_t> counts;  ///< row-major [theta][r]
  std::uint64_t outside = 0;          ///< samples with r >= r_max

  PolarHistogram() = default;
  PolarHistogram(double xi_, double r_max_, int n_theta_ = 64, int n_r_ = 128);

  void add(const Vec2d& x);
  void merge(const PolarHistogram& other);
  std::uint64_t total() const;
  std::uint64_t& at(int i_theta, int i_r) { return counts[i_theta * n_r + i_r]; }
  std::uint64_t at(int i_theta, int i_r) const { return counts[i_theta * n_r + i_r]; }
  double theta_lo(int i) const { return xi * i / n_theta; }
  double theta_hi(int i) const { return xi * (i + 1) / n_theta; }
  double r_lo(int j) const { return r_max * j / n_r; }
  double r_hi(int j) const { return r_max * (j + 1) / n_r; }
  double bin_area(int i, int j) const;
};

struct SimResult {
  PolarHistogram histogram;
  std::uint64_t visits = 0;
  std::uint64_t vertex_projections = 0;
  double mean_radius = 0;
};

/// Reflected Euler scheme with drift -mu. Deterministic in cfg (thread
/// count included). Throws NumericalBlowupError on a non-finite state.
SimResult simulate_srbm(const WedgeGeometryd& g, const Driftd& d, const SimConfig& cfg,
                        const PolarHistogram& layout);

struct HistogramComparison {
  double l1 = 0;           ///< sum over bins of |empirical - exact| mass, plus the tail
  double l2 = 0;           ///< L2 distance of the bin-averaged densities
  double noise_floor = 0;  ///< expected l1 for independent samples of the exact law
  double exact_outside = 0;
  double empirical_outside = 0;
};

/// Exact probability mass of each histogram bin, same layout as counts.
std::vector<double> bin_masses(const SumOfExponentialsd& density, const PolarHistogram& layout);

HistogramComparison compare_histogram(const PolarHistogram& hist,
                                      const NormalizedDensityd& density);

/// L1 distance between the normalized bin masses of two histograms.
double histogram_l1(const PolarHistogram& a, const PolarHistogram& b);

/// CSV with header theta_lo,theta_hi,r_lo,r_hi,count,density_estimate.
void write_histogram_csv(std::ostream& os, const PolarHistogram& hist);

struct SurvivalEstimate {
  double estimate = 0;       ///< fraction alive at the horizon
  double standard_error = 0;
  double half_horizon = 0;   ///< fraction alive at horizon / 2
  std::int64_t paths = 0;
};

/// Free Brownian motion with drift -mu from -x; fraction of paths that stay
/// in -S up to the horizon. Per-step crossings are caught with the
/// Brownian-bridge exit probability of each face.
SurvivalEstimate survival_mc(const WedgeGeometryd& g, const Driftd& d, const Vec2d& x,
                             double horizon, const SimConfig& cfg);

struct DihedralGroup {
  int m = 0;
  std::vector<LabelMatrixd> elements;  ///< I, R_xi, rho_{2xi}, rho_{2xi} R_xi, ...
  std::vector<int> signs;
};

DihedralGroup make_dihedral_group(int m);

/// sum_w sgn(w) e^{-<mu, (I - w) x>}; throws InconsistencyError outside [0, 1].
double group_survival_formula(const DihedralGroup& group, const Driftd& d, const Vec2d& x);

/// Terms sgn(w) <mu,(I-w)v2><mu,(I-w)v1> e^{-<mu,(I-w)x>} with vanishing
/// prefactors pruned. Needs delta = epsilon = xi = pi / m.
SumOfExponentialsd density_from_group(const DihedralGroup& group, const WedgeGeometryd& g,
                                      const Driftd& d);

struct DualityCheck {
  double lhs = 0;  ///< stationary mass of {y : <y, n_i> <= <x, n_i>}
  double rhs = 0;  ///< survival probability from the group formula
  double diff = 0;
  double quadrature_error = 0;
};

DualityCheck duality_check(const WedgeGeometryd& g, const Driftd& d, const Vec2d& x,
                           const QuadratureSpec& quad = {});

}  // namespace wedgeflow
