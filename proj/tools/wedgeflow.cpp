// SPDX-License-Identifier: MIT
// tools/wedgeflow.cpp
//
// wedgeflow density|validate|simulate|survival|duality --config <file> [--out <dir>] [--seed N]

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "wedgeflow/config.hpp"
#include "wedgeflow/density.hpp"
#include "wedgeflow/errors.hpp"
#include "wedgeflow/quadrature.hpp"
#include "wedgeflow/reflection_sim.hpp"
#include "wedgeflow/validate.hpp"

namespace fs = std::filesystem;
using namespace wedgeflow;

namespace {

struct Context {
  RunConfig cfg;
  WedgeGeometryd geometry;
  Driftd drift;
  fs::path out;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write '" + path.string() + "'");
  os.imbue(std::locale::classic());
  return os;
}

int exit_code(ExitCode c) { return static_cast<int>(c); }

int cmd_density(const Context& ctx) {
  const auto sum = density_expanded(ctx.geometry, ctx.drift);
  const auto den = normalize(sum);
  auto terms = open_output(ctx.out / "terms.csv");
  write_terms_csv(terms, den.sum);
  auto grid = open_output(ctx.out / "grid.csv");
  PolarGrid layout{ctx.cfg.grid_theta, ctx.cfg.grid_r, ctx.cfg.grid_rmax};
  write_grid_csv(grid, sum, den.normalizing_constant, layout);
  std::cout << "density: l = " << *ell_of_alpha(ctx.geometry) << ", " << sum.size()
            << " terms, normalizing constant " << format_double(den.normalizing_constant)
            << "\n";
  return exit_code(ExitCode::ok);
}

int cmd_validate(const Context& ctx) {
  ValidationOptions opts;
  opts.tol.pde = ctx.cfg.tol_pde;
  opts.tol.bc = ctx.cfg.tol_bc;
  opts.tol.bar_floor = ctx.cfg.tol_bar;
  opts.tol.corner_spread = ctx.cfg.tol_corner_spread;
  opts.perturb_coefficient = ctx.cfg.perturb_coefficient;
  opts.perturb_term = ctx.cfg.perturb_term;
  const auto rep = validate(ctx.geometry, ctx.drift, opts);
  auto os = open_output(ctx.out / "report.txt");
  write_report(os, rep);
  write_report(std::cout, rep);
  return exit_code(rep.passed ? ExitCode::ok : ExitCode::validation_failed);
}

int cmd_simulate(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& g = ctx.geometry;
  const bool stable = is_stable(g, ctx.drift);

  std::optional<NormalizedDensityd> closed_form;
  if (stable && ell_of_alpha(g) &&
      drift_admissible(g, ctx.drift, *ell_of_alpha(g)) == DriftClass::in_theta_ell) {
    closed_form = normalize(density_expanded(g, ctx.drift));
  }
  double r_max = cfg.hist_rmax;
  if (!(r_max > 0)) r_max = closed_form ? radius_for_tail_mass(closed_form->sum, 1e-4) : 10.0;

  const PolarHistogram layout(g.xi, r_max, cfg.hist_theta, cfg.hist_r);
  const auto res = simulate_srbm(g, ctx.drift, cfg.sim, layout);
  {
    auto os = open_output(ctx.out / "histogram.csv");
    write_histogram_csv(os, res.histogram);
  }

  std::ostringstream rep;
  rep << "samples=" << res.visits << '\n'
      << "vertex_projections=" << res.vertex_projections << '\n'
      << "mean_radius=" << format_double(res.mean_radius) << '\n'
      << "r_max=" << format_double(r_max) << '\n'
      << "scheme=" << to_string(cfg.sim.scheme) << '\n'
      << "stable=" << (stable ? "true" : "false") << '\n';
  int code = exit_code(stable ? ExitCode::ok : ExitCode::unstable_drift);
  if (closed_form) {
    const auto cmp = compare_histogram(res.histogram, *closed_form);
    rep << "l1=" << format_double(cmp.l1) << '\n'
        << "l2=" << format_double(cmp.l2) << '\n'
        << "noise_floor=" << format_double(cmp.noise_floor) << '\n'
        << "exact_outside=" << format_double(cmp.exact_outside) << '\n'
        << "empirical_outside=" << format_double(cmp.empirical_outside) << '\n';
    if (cfg.l1_tolerance > 0) {
      const bool ok = cmp.l1 <= cfg.l1_tolerance;
      rep << "l1_tolerance=" << format_double(cfg.l1_tolerance) << '\n'
          << "passed=" << (ok ? "true" : "false") << '\n';
      if (!ok) code = exit_code(ExitCode::validation_failed);
    }
  }
  if (!stable) rep << "note=drift outside the stability cone: no stationary distribution\n";
  auto os = open_output(ctx.out / "simulate_report.txt");
  os << rep.str();
  std::cout << rep.str();
  return code;
}

int dihedral_order(const WedgeGeometryd& g) {
  const int m = static_cast<int>(std::lround(std::numbers::pi / g.xi));
  if (m < 2 || std::abs(g.xi - std::numbers::pi / m) > kAngleTol) {
    throw DomainError("this command needs xi = pi / m for an integer m >= 2");
  }
  return m;
}

int cmd_survival(const Context& ctx) {
  const auto& g = ctx.geometry;
  const auto group = make_dihedral_group(dihedral_order(g));
  if (!g.interior_contains(ctx.drift.mu)) throw DomainError("survival needs mu inside the wedge");
  const auto est = survival_mc(g, ctx.drift, ctx.cfg.point, ctx.cfg.horizon, ctx.cfg.sim);
  const double exact = group_survival_formula(group, ctx.drift, ctx.cfg.point);
  const double z = (est.estimate - exact) / est.standard_error;
  auto os = open_output(ctx.out / "survival.csv");
  os << "x,y,horizon,paths,estimate,standard_error,half_horizon_estimate,group_formula,z_score\n"
     << format_double(ctx.cfg.point.x()) << ',' << format_double(ctx.cfg.point.y()) << ','
     << format_double(ctx.cfg.horizon) << ',' << est.paths << ',' << format_double(est.estimate)
     << ',' << format_double(est.standard_error) << ',' << format_double(est.half_horizon) << ','
     << format_double(exact) << ',' << format_double(z) << '\n';
  std::cout << "survival: estimate " << format_double(est.estimate) << " +- "
            << format_double(est.standard_error) << ", group formula " << format_double(exact)
            << ", z = " << format_double(z) << '\n';
  return exit_code(std::abs(z) <= 3 ? ExitCode::ok : ExitCode::validation_failed);
}

int cmd_duality(const Context& ctx) {
  dihedral_order(ctx.geometry);
  const auto chk = duality_check(ctx.geometry, ctx.drift, ctx.cfg.point);
  auto os = open_output(ctx.out / "duality.csv");
  os << "x,y,lhs,rhs,diff,quadrature_error\n"
     << format_double(ctx.cfg.point.x()) << ',' << format_double(ctx.cfg.point.y()) << ','
     << format_double(chk.lhs) << ',' << format_double(chk.rhs) << ',' << format_double(chk.diff)
     << ',' << format_double(chk.quadrature_error) << '\n';
  std::cout << "duality: lhs " << format_double(chk.lhs) << ", rhs " << format_double(chk.rhs)
            << ", diff " << format_double(chk.diff) << '\n';
  const bool ok = std::abs(chk.diff) <= 1e-6 + chk.quadrature_error;
  return exit_code(ok ? ExitCode::ok : ExitCode::validation_failed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-exponential stationary densities of reflected Brownian motion in a wedge"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;

  using Handler = int (*)(const Context&);
  const std::pair<const char*, Handler> commands[] = {
      {"density", cmd_density},   {"validate", cmd_validate}, {"simulate", cmd_simulate},
      {"survival", cmd_survival}, {"duality", cmd_duality},
  };
  const char* descriptions[] = {
      "write the exponential terms and a density grid",
      "run the PDE, boundary, adjoint-relationship, sign and corner checks",
      "simulate the reflected process and compare with the closed form",
      "estimate the survival probability of free Brownian motion",
      "compare stationary region mass with the survival probability",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, descriptions[i]);
    sub->add_option("--config", config_path, "key=value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the RNG seed");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ExitCode::usage);
  }

  try {
    Context ctx;
    ctx.cfg = load_config(config_path);
    if (seed) ctx.cfg.sim.seed = *seed;
    ctx.geometry = make_wedge(ctx.cfg.xi, ctx.cfg.delta, ctx.cfg.epsilon);
    ctx.drift = make_drift(ctx.cfg.mu);
    ctx.out = out_dir;
    fs::create_directories(ctx.out);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return commands[i].second(ctx);
  } catch (const Error& e) {
    std::cerr << "wedgeflow: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "wedgeflow: " << e.what() << '\n';
    return exit_code(ExitCode::numerical_failure);
  }
  return exit_code(ExitCode::usage);
}
