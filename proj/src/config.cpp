// SPDX-License-Identifier: MIT
// src/config.cpp

#include "wedgeflow/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

#include "wedgeflow/errors.hpp"

namespace wedgeflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw DomainError("not a number: '" + text + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw DomainError("not an integer: '" + text + "'");
  }
  return v;
}

double parse_wedge_angle(const std::string& text) {
  const double a = parse_angle(text);
  if (!(a > 0 && a < std::numbers::pi)) throw DomainError("angle out of (0, pi): " + text);
  return a;
}

}  // namespace

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^([+-])?\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?$)");
  const std::string t = trim(text);
  std::smatch m;
  if (std::regex_match(t, m, pi_form)) {
    double v = std::numbers::pi;
    if (m[2].matched) v *= parse_number(m[2].str());
    if (m[3].matched) {
      const double q = parse_number(m[3].str());
      if (q == 0) throw DomainError("zero denominator in angle '" + text + "'");
      v /= q;
    }
    return m[1].matched && m[1].str() == "-" ? -v : v;
  }
  return parse_number(t);
}

Vec2d parse_vec2(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw DomainError("expected 'a, b': '" + text + "'");
  return Vec2d(parse_number(text.substr(0, comma)), parse_number(text.substr(comma + 1)));
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError("line " + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }

  auto& s = cfg.sim;
  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"xi", [&](const auto& v) { cfg.xi = parse_wedge_angle(v); }},
      {"delta", [&](const auto& v) { cfg.delta = parse_wedge_angle(v); }},
      {"epsilon", [&](const auto& v) { cfg.epsilon = parse_wedge_angle(v); }},
      {"mu", [&](const auto& v) { cfg.mu = parse_vec2(v); }},
      {"grid_theta", [&](const auto& v) { cfg.grid_theta = parse_integer<int>(v); }},
      {"grid_r", [&](const auto& v) { cfg.grid_r = parse_integer<int>(v); }},
      {"grid_rmax", [&](const auto& v) { cfg.grid_rmax = parse_number(v); }},
      {"tol_pde", [&](const auto& v) { cfg.tol_pde = parse_number(v); }},
      {"tol_bc", [&](const auto& v) { cfg.tol_bc = parse_number(v); }},
      {"tol_bar", [&](const auto& v) { cfg.tol_bar = parse_number(v); }},
      {"tol_corner_spread", [&](const auto& v) { cfg.tol_corner_spread = parse_number(v); }},
      {"perturb_coefficient", [&](const auto& v) { cfg.perturb_coefficient = parse_number(v); }},
      {"perturb_term", [&](const auto& v) { cfg.perturb_term = parse_integer<int>(v); }},
      {"dt", [&](const auto& v) { s.dt = parse_number(v); }},
      {"steps", [&](const auto& v) { s.steps = parse_integer<std::int64_t>(v); }},
      {"paths", [&](const auto& v) { s.paths = parse_integer<std::int64_t>(v); }},
      {"seed", [&](const auto& v) { s.seed = parse_integer<std::uint64_t>(v); }},
      {"start", [&](const auto& v) { s.start = parse_vec2(v); }},
      {"burn_in", [&](const auto& v) { s.burn_in = parse_integer<std::int64_t>(v); }},
      {"record_every", [&](const auto& v) { s.record_every = parse_integer<std::int64_t>(v); }},
      {"threads", [&](const auto& v) { s.threads = parse_integer<int>(v); }},
      {"diffusion", [&](const auto& v) { s.diffusion = parse_number(v); }},
      {"scheme", [&](const auto& v) { s.scheme = parse_push_scheme(v); }},
      {"hist_theta", [&](const auto& v) { cfg.hist_theta = parse_integer<int>(v); }},
      {"hist_r", [&](const auto& v) { cfg.hist_r = parse_integer<int>(v); }},
      {"hist_rmax", [&](const auto& v) { cfg.hist_rmax = parse_number(v); }},
      {"l1_tolerance", [&](const auto& v) { cfg.l1_tolerance = parse_number(v); }},
      {"point", [&](const auto& v) { cfg.point = parse_vec2(v); }},
      {"horizon", [&](const auto& v) { cfg.horizon = parse_number(v); }},
  };

  bool polar_mu = false;
  for (const auto& [key, value] : kv) {
    if (key == "mu_angle" || key == "mu_norm") {
      polar_mu = true;
      continue;
    }
    const auto it = setters.find(key);
    if (it == setters.end()) throw DomainError("unknown config key '" + key + "'");
    it->second(value);
  }
  if (polar_mu) {
    if (kv.count("mu")) throw DomainError("give either mu or mu_angle/mu_norm, not both");
    const double angle = parse_angle(kv.count("mu_angle") ? kv["mu_angle"] : "0");
    const double norm = kv.count("mu_norm") ? parse_number(kv["mu_norm"]) : 1.0;
    cfg.mu = norm * unit_vector(angle);
  }
  for (const char* key : {"xi", "delta", "epsilon"}) {
    if (!kv.count(key)) throw DomainError(std::string("missing config key '") + key + "'");
  }
  if (!kv.count("mu") && !polar_mu) throw DomainError("missing drift: give mu or mu_angle");
  if (!cfg.mu.allFinite() || cfg.mu.squaredNorm() == 0) {
    throw DomainError("drift vector must be finite and nonzero");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string render_config(const RunConfig& cfg) {
  const auto vec = [](const Vec2d& v) { return format_double(v.x()) + ", " + format_double(v.y()); };
  const auto& s = cfg.sim;
  std::ostringstream os;
  os << "xi = " << format_double(cfg.xi) << '\n'
     << "delta = " << format_double(cfg.delta) << '\n'
     << "epsilon = " << format_double(cfg.epsilon) << '\n'
     << "mu = " << vec(cfg.mu) << '\n'
     << "grid_theta = " << cfg.grid_theta << '\n'
     << "grid_r = " << cfg.grid_r << '\n'
     << "grid_rmax = " << format_double(cfg.grid_rmax) << '\n'
     << "tol_pde = " << format_double(cfg.tol_pde) << '\n'
     << "tol_bc = " << format_double(cfg.tol_bc) << '\n'
     << "tol_bar = " << format_double(cfg.tol_bar) << '\n'
     << "tol_corner_spread = " << format_double(cfg.tol_corner_spread) << '\n'
     << "perturb_coefficient = " << format_double(cfg.perturb_coefficient) << '\n'
     << "perturb_term = " << cfg.perturb_term << '\n'
     << "dt = " << format_double(s.dt) << '\n'
     << "steps = " << s.steps << '\n'
     << "paths = " << s.paths << '\n'
     << "seed = " << s.seed << '\n'
     << "start = " << vec(s.start) << '\n'
     << "burn_in = " << s.burn_in << '\n'
     << "record_every = " << s.record_every << '\n'
     << "threads = " << s.threads << '\n'
     << "diffusion = " << format_double(s.diffusion) << '\n'
     << "scheme = " << to_string(s.scheme) << '\n'
     << "hist_theta = " << cfg.hist_theta << '\n'
     << "hist_r = " << cfg.hist_r << '\n'
     << "hist_rmax = " << format_double(cfg.hist_rmax) << '\n'
     << "l1_tolerance = " << format_double(cfg.l1_tolerance) << '\n'
     << "point = " << vec(cfg.point) << '\n'
     << "horizon = " << format_double(cfg.horizon) << '\n';
  return os.str();
}

}  // namespace wedgeflow
