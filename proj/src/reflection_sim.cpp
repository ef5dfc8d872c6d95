// SPDX-License-Identifier: MIT
// src/reflection_sim.cpp

#include "wedgeflow/reflection_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <locale>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "wedgeflow/density.hpp"
#include "wedgeflow/errors.hpp"

namespace wedgeflow {

const char* to_string(PushScheme s) {
  switch (s) {
    case PushScheme::projection: return "projection";
    case PushScheme::shifted: return "shifted";
    case PushScheme::bridge: return "bridge";
  }
  return "?";
}

PushScheme parse_push_scheme(const std::string& s) {
  if (s == "projection") return PushScheme::projection;
  if (s == "shifted") return PushScheme::shifted;
  if (s == "bridge") return PushScheme::bridge;
  throw DomainError("unknown push scheme '" + s + "'");
}

PolarHistogram::PolarHistogram(double xi_, double r_max_, int n_theta_, int n_r_)
    : xi(xi_), r_max(r_max_), n_theta(n_theta_), n_r(n_r_),
      counts(static_cast<std::size_t>(n_theta_) * n_r_, 0) {
  if (!(xi > 0) || !(r_max > 0) || n_theta < 1 || n_r < 1) {
    throw DomainError("histogram needs positive extent and bin counts");
  }
}

void PolarHistogram::add(const Vec2d& x) {
  const double r = x.norm();
  if (r >= r_max) {
    ++outside;
    return;
  }
  const double theta = std::clamp(std::atan2(x.y(), x.x()), 0.0, xi);
  const int i = std::min(n_theta - 1, static_cast<int>(theta / xi * n_theta));
  const int j = std::min(n_r - 1, static_cast<int>(r / r_max * n_r));
  ++at(i, j);
}

void PolarHistogram::merge(const PolarHistogram& other) {
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
  outside += other.outside;
}

std::uint64_t PolarHistogram::total() const {
  std::uint64_t n = outside;
  for (auto c : counts) n += c;
  return n;
}

double PolarHistogram::bin_area(int i, int j) const {
  const double r0 = r_lo(j), r1 = r_hi(j);
  return (theta_hi(i) - theta_lo(i)) * (r1 * r1 - r0 * r0) / 2;
}

namespace {

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  return std::mt19937_64(seq);
}

int resolve_threads(int requested, std::int64_t work) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::int64_t>(n, std::max<std::int64_t>(1, work)));
}

// Runs body(path) for every path in [first, first + count), split into
// contiguous blocks over worker threads; body(block_index, path).
template <typename Body>
void parallel_paths(std::int64_t first, std::int64_t count, int threads, Body&& body) {
  const int n = resolve_threads(threads, count);
  if (n == 1) {
    for (std::int64_t p = first; p < first + count; ++p) body(0, p);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n);
  for (int t = 0; t < n; ++t) {
    const std::int64_t lo = first + count * t / n, hi = first + count * (t + 1) / n;
    pool.emplace_back([&, t, lo, hi] {
      try {
        for (std::int64_t p = lo; p < hi; ++p) body(t, p);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Pushes x back into the wedge along v_i, at most 8 rounds, then falls
// back to the vertex. Returns false on the fallback.
bool push_into_wedge(const WedgeGeometryd& g, Vec2d& x, double level, PushScheme scheme) {
  for (int round = 0; round < 8; ++round) {
    const double a1 = g.n1.dot(x), a2 = g.n2.dot(x);
    if (a1 >= 0 && a2 >= 0) return true;
    const bool first = a1 < a2;
    const double a = first ? a1 : a2;
    const double target = scheme == PushScheme::shifted ? level : 0.0;
    x += (target - a) * (first ? g.v1 : g.v2);
  }
  if (g.n1.dot(x) >= 0 && g.n2.dot(x) >= 0) return true;
  x.setZero();
  return false;
}

// Local time a face accumulates over one step: minus the minimum of the
// normal coordinate along a Brownian bridge from z0 to z1 with variance
// var, or zero when the bridge stays nonnegative.
template <typename Engine>
double bridge_local_time(double z0, double z1, double var, Engine& engine) {
  if (z0 > 0 && z1 > 0 && 2 * z0 * z1 > 700 * var) return 0.0;
  std::uniform_real_distribution<double> uniform;
  const double u = 1 - uniform(engine);  // (0, 1]
  const double low = (z0 + z1 - std::sqrt((z1 - z0) * (z1 - z0) - 2 * var * std::log(u))) / 2;
  return std::max(0.0, -low);
}

}  // namespace

SimResult simulate_srbm(const WedgeGeometryd& g, const Driftd& d, const SimConfig& cfg,
                        const PolarHistogram& layout) {
  if (!(cfg.dt > 0) || cfg.steps < 1 || cfg.paths < 1 || cfg.record_every < 1 ||
      cfg.burn_in < 0 || !(cfg.diffusion >= 0)) {
    throw DomainError("invalid simulation configuration");
  }
  if (!g.defines_srbm()) throw DomainError("alpha >= 1: the reflected process is not defined");
  if (!g.contains(cfg.start)) throw DomainError("start point outside the wedge");

  const int n_threads = resolve_threads(cfg.threads, cfg.paths);
  std::vector<PolarHistogram> hists(n_threads, layout);
  for (auto& h : hists) {
    std::fill(h.counts.begin(), h.counts.end(), 0);
    h.outside = 0;
  }
  std::vector<std::uint64_t> vertex(n_threads, 0);
  std::vector<double> radius_sum(cfg.paths, 0.0);
  const double sq = cfg.diffusion * std::sqrt(cfg.dt);
  const Vec2d drift_step = -d.mu * cfg.dt;
  const double level = kBoundaryShift * sq;

  parallel_paths(cfg.first_path, cfg.paths, n_threads, [&](int t, std::int64_t path) {
    auto engine = path_engine(cfg.seed, static_cast<std::uint64_t>(path));
    std::normal_distribution<double> normal;
    Vec2d x = cfg.start;
    double rsum = 0;
    const std::int64_t total = cfg.burn_in + cfg.steps;
    for (std::int64_t step = 0; step < total; ++step) {
      const double z1 = normal(engine), z2 = normal(engine);
      const Vec2d inc = drift_step + sq * Vec2d(z1, z2);
      if (cfg.scheme == PushScheme::bridge && sq > 0) {
        // each face sees a one-dimensional reflected motion in its normal
        // coordinate; near the vertex the two pushes are applied together
        // and any remaining excursion is projected below
        const double var = sq * sq;
        const double l1 = bridge_local_time(g.n1.dot(x), g.n1.dot(x + inc), var, engine);
        const double l2 = bridge_local_time(g.n2.dot(x), g.n2.dot(x + inc), var, engine);
        x += inc + l1 * g.v1 + l2 * g.v2;
      } else {
        x += inc;
      }
      if (!x.allFinite()) throw NumericalBlowupError("non-finite state in simulation");
      if (!push_into_wedge(g, x, level, cfg.scheme)) ++vertex[t];
      const std::int64_t rec = step - cfg.burn_in;
      if (rec >= 0 && rec % cfg.record_every == 0) {
        hists[t].add(x);
        rsum += x.norm();
      }
    }
    radius_sum[path - cfg.first_path] = rsum;
  });

  SimResult out;
  out.histogram = layout;
  std::fill(out.histogram.counts.begin(), out.histogram.counts.end(), 0);
  out.histogram.outside = 0;
  for (const auto& h : hists) out.histogram.merge(h);
  for (auto v : vertex) out.vertex_projections += v;
  out.visits = out.histogram.total();
  double rs = 0;
  for (double r : radius_sum) rs += r;
  out.mean_radius = out.visits > 0 ? rs / static_cast<double>(out.visits) : 0.0;
  return out;
}

std::vector<double> bin_masses(const SumOfExponentialsd& density, const PolarHistogram& layout) {
  const auto rule = gauss_legendre<double>(8);
  std::vector<double> masses(layout.counts.size(), 0.0);
  for (int i = 0; i < layout.n_theta; ++i) {
    for (int j = 0; j < layout.n_r; ++j) {
      const double r0 = layout.r_lo(j), r1 = layout.r_hi(j);
      masses[i * layout.n_r + j] =
          integrate<double>(rule, layout.theta_lo(i), layout.theta_hi(i), [&](double theta) {
            const Vec2d w = unit_vector(theta);
            double acc = 0;
            for (const auto& term : density.terms) {
              const double b = term.exponent.dot(w);
              // antiderivative of r e^{-b r}
              auto f = [b](double r) { return -std::exp(-b * r) * (b * r + 1) / (b * b); };
              acc += term.coeff * (f(r1) - f(r0));
            }
            return acc;
          });
    }
  }
  return masses;
}

HistogramComparison compare_histogram(const PolarHistogram& hist,
                                      const NormalizedDensityd& density) {
  const auto exact = bin_masses(density.sum, hist);
  const double n = static_cast<double>(hist.total());
  if (n <= 0) throw DomainError("empty histogram");
  HistogramComparison out;
  double inside = 0, l2 = 0;
  for (int i = 0; i < hist.n_theta; ++i) {
    for (int j = 0; j < hist.n_r; ++j) {
      const double p = exact[i * hist.n_r + j];
      const double q = static_cast<double>(hist.at(i, j)) / n;
      inside += p;
      out.l1 += std::abs(q - p);
      l2 += (q - p) * (q - p) / hist.bin_area(i, j);
      out.noise_floor += std::sqrt(2 * std::max(p, 0.0) * (1 - p) / (std::numbers::pi * n));
    }
  }
  out.exact_outside = std::max(0.0, 1 - inside);
  out.empirical_outside = static_cast<double>(hist.outside) / n;
  out.l1 += std::abs(out.exact_outside - out.empirical_outside);
  out.l2 = std::sqrt(l2);
  return out;
}

double histogram_l1(const PolarHistogram& a, const PolarHistogram& b) {
  const double na = static_cast<double>(a.total()), nb = static_cast<double>(b.total());
  double l1 = std::abs(a.outside / na - b.outside / nb);
  for (std::size_t k = 0; k < a.counts.size(); ++k) l1 += std::abs(a.counts[k] / na - b.counts[k] / nb);
  return l1;
}

void write_histogram_csv(std::ostream& os, const PolarHistogram& hist) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  os << "theta_lo,theta_hi,r_lo,r_hi,count,density_estimate\n";
  const double n = static_cast<double>(hist.total());
  for (int i = 0; i < hist.n_theta; ++i)
    for (int j = 0; j < hist.n_r; ++j) {
      const auto c = hist.at(i, j);
      const double est = n > 0 ? static_cast<double>(c) / (n * hist.bin_area(i, j)) : 0.0;
      os << hist.theta_lo(i) << ',' << hist.theta_hi(i) << ',' << hist.r_lo(j) << ','
         << hist.r_hi(j) << ',' << c << ',' << est << '\n';
    }
}

SurvivalEstimate survival_mc(const WedgeGeometryd& g, const Driftd& d, const Vec2d& x,
                             double horizon, const SimConfig& cfg) {
  if (!(horizon > 0)) throw DomainError("horizon must be positive");
  if (!(cfg.dt > 0) || cfg.paths < 1 || !(cfg.diffusion > 0)) {
    throw DomainError("invalid survival configuration");
  }
  // Work with y = -B, which starts at x, has drift +mu and must stay in S.
  const std::int64_t n_steps = static_cast<std::int64_t>(std::ceil(horizon / cfg.dt));
  const std::int64_t half_step = n_steps / 2;
  const double var = cfg.diffusion * cfg.diffusion * cfg.dt;
  const double sq = std::sqrt(var);
  const Vec2d drift_step = d.mu * cfg.dt;
  const double a1 = d.mu.dot(g.n1), a2 = d.mu.dot(g.n2);
  const double s2 = cfg.diffusion * cfg.diffusion;

  // death step per path; n_steps + 1 means alive at the horizon
  std::vector<std::int64_t> death(cfg.paths, n_steps + 1);
  const int n_threads = resolve_threads(cfg.threads, cfg.paths);
  parallel_paths(cfg.first_path, cfg.paths, n_threads, [&](int, std::int64_t path) {
    auto engine = path_engine(cfg.seed, static_cast<std::uint64_t>(path));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    auto& slot = death[path - cfg.first_path];
    Vec2d y = x;
    double h1 = g.n1.dot(y), h2 = g.n2.dot(y);
    if (!(h1 > 0 && h2 > 0)) {
      slot = 0;
      return;
    }
    for (std::int64_t step = 1; step <= n_steps; ++step) {
      // remaining exit probability is at most e^{-2 a1 h1} + e^{-2 a2 h2}
      if (a1 > 0 && a2 > 0 &&
          std::exp(-2 * a1 * h1 / s2) + std::exp(-2 * a2 * h2 / s2) < 1e-12) {
        return;
      }
      const double z1 = normal(engine), z2 = normal(engine);
      y += drift_step + sq * Vec2d(z1, z2);
      const double k1 = g.n1.dot(y), k2 = g.n2.dot(y);
      if (!(k1 > 0 && k2 > 0)) {
        slot = step;
        return;
      }
      const double p1 = std::exp(-2 * h1 * k1 / var), p2 = std::exp(-2 * h2 * k2 / var);
      const double kill = 1 - (1 - p1) * (1 - p2);
      if (kill > 1e-300 && uniform(engine) < kill) {
        slot = step;
        return;
      }
      h1 = k1;
      h2 = k2;
    }
  });

  SurvivalEstimate out;
  out.paths = cfg.paths;
  std::int64_t alive = 0, alive_half = 0;
  for (auto s : death) {
    if (s > n_steps) ++alive;
    if (s > half_step) ++alive_half;
  }
  const double n = static_cast<double>(cfg.paths);
  out.estimate = alive / n;
  out.half_horizon = alive_half / n;
  out.standard_error = std::sqrt(std::max(out.estimate * (1 - out.estimate), 0.25 / n) / n);
  return out;
}

DihedralGroup make_dihedral_group(int m) {
  if (m < 2) throw DomainError("dihedral group needs m >= 2");
  DihedralGroup grp;
  grp.m = m;
  const double xi = std::numbers::pi / m;
  const auto r_xi = LabelMatrixd::reflection(xi);
  for (int k = 0; k < m; ++k) {
    const auto rot = LabelMatrixd::rotation(2 * k * xi);
    grp.elements.push_back(rot);
    grp.signs.push_back(1);
    grp.elements.push_back(rot * r_xi);
    grp.signs.push_back(-1);
  }
  return grp;
}

double group_survival_formula(const DihedralGroup& group, const Driftd& d, const Vec2d& x) {
  double acc = 0;
  for (std::size_t k = 0; k < group.elements.size(); ++k) {
    acc += group.signs[k] * std::exp(-label_exponent(d.mu, group.elements[k]).dot(x));
  }
  if (!(acc >= -1e-10 && acc <= 1 + 1e-10)) {
    throw InconsistencyError("survival probability outside [0, 1]: invalid drift or point");
  }
  return acc;
}

SumOfExponentialsd density_from_group(const DihedralGroup& group, const WedgeGeometryd& g,
                                      const Driftd& d) {
  const double xi = std::numbers::pi / group.m;
  if (std::abs(g.xi - xi) > kAngleTol || std::abs(g.delta - xi) > kAngleTol ||
      std::abs(g.epsilon - xi) > kAngleTol) {
    throw DomainError("group density needs delta = epsilon = xi = pi / m");
  }
  SumOfExponentialsd s;
  s.geometry = g;
  s.drift = d;
  for (std::size_t k = 0; k < group.elements.size(); ++k) {
    const auto& w = group.elements[k];
    const double coeff =
        group.signs[k] * label_inner(d.mu, w, g.v2) * label_inner(d.mu, w, g.v1);
    s.terms.push_back(make_term(coeff, d.mu, w));
  }
  prune(s);
  return s;
}

DualityCheck duality_check(const WedgeGeometryd& g, const Driftd& d, const Vec2d& x,
                           const QuadratureSpec& quad) {
  const int m = static_cast<int>(std::lround(std::numbers::pi / g.xi));
  const auto group = make_dihedral_group(m);
  const auto den = normalize(density_from_group(group, g, d), quad);
  DualityCheck out;
  out.lhs = parallelogram_integral(den.sum, g.n1.dot(x), g.n2.dot(x));
  out.rhs = group_survival_formula(group, d, x);
  out.diff = out.lhs - out.rhs;
  out.quadrature_error = den.quadrature_error_estimate;
  return out;
}

}  // namespace wedgeflow
