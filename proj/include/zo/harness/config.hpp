#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zo/errors.hpp"
#include "zo/vec.hpp"

namespace zo {

struct ProblemSpec {
  std::string kind = "smooth_quadratic";
  double sigma_noise = 0.0;             // quadratic / nonsmooth_norm
  std::string sigma_noise_scale = "fixed";  // fixed | inv_sqrt_d
  double L = 1.0;                       // gaussian_linear / l1_median / nonsmooth_norm
  double q = 2.0;                       // class exponent (gaussian_linear, l1_median)
  double p = 2.0;                       // l1_median
  double sigma = 0.5;                   // l1_median observation noise
  double theta_star_frac = 0.0;         // theta* = frac * radius * 1 / ||1||_q
  std::string v_mode = "per_replication";  // per_replication | fixed
  std::uint64_t v_seed = 1;
  double sigma2_override = kNaN;  // non-canonical hard instance
  double delta_override = kNaN;
};

struct GeometrySpec {
  std::string kind = "euclidean";  // euclidean | pnorm
  double p = 0.0;                  // 0 = default 1 + 1/log(2d)
};

struct DomainSpec {
  double q = 2.0;  // 2 | 1
  double radius = 1.0;
};

struct EstimatorSpec {
  std::string kind = "two_point";  // two_point | two_point_avg | double_smoothed | full_info
  std::string dist = "sphere";
  std::string dist1 = "ball";
  std::string dist2 = "sphere";
};

struct ScheduleSpec {
  std::string family = "smooth";  // smooth | nonsmooth | full_info
  double alpha_mult = 1.0;
  double u_mult = 1.0;
};

// A sweep is the cross product of the grids (d outer, then T, m, alpha),
// each grid point replicated; row seeds are
// mix64(master_seed, grid_index, replication_index).
struct SweepConfig {
  ProblemSpec problem;
  GeometrySpec geometry;
  DomainSpec domain;
  EstimatorSpec estimator;
  ScheduleSpec schedule;
  std::vector<int> d_grid{1};
  std::vector<long long> T_grid;
  std::vector<int> m_grid{1};
  std::vector<double> alpha_grid;  // empty -> {schedule.alpha_mult}
  int replications = 1;
  std::uint64_t master_seed = 0;
  std::string output_path;

  void validate() const {
    if (replications < 1) throw ConfigError("sweep: replications must be >= 1");
    if (T_grid.empty()) throw ConfigError("sweep: empty T grid");
    if (d_grid.empty()) throw ConfigError("sweep: empty d grid");
    if (m_grid.empty()) throw ConfigError("sweep: empty m grid");
    for (long long T : T_grid)
      if (T < 1) throw ConfigError("sweep: T values must be >= 1");
    for (int d : d_grid)
      if (d < 1) throw ConfigError("sweep: d values must be >= 1");
  }

  std::vector<double> effective_alpha_grid() const {
    return alpha_grid.empty() ? std::vector<double>{schedule.alpha_mult}
                              : alpha_grid;
  }

  std::string canonical_text() const;
  std::string digest() const;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key '" + key + "': " + v);
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer value for key '" + key + "': " + v);
  }
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v,
                          Parse parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<T>(parse(key, item)));
  }
  if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
  return out;
}

}  // namespace detail

inline std::string SweepConfig::canonical_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "problem.kind=" << problem.kind << "\n"
     << "problem.sigma_noise=" << problem.sigma_noise << "\n"
     << "problem.sigma_noise_scale=" << problem.sigma_noise_scale << "\n"
     << "problem.L=" << problem.L << "\n"
     << "problem.q=" << problem.q << "\n"
     << "problem.p=" << problem.p << "\n"
     << "problem.sigma=" << problem.sigma << "\n"
     << "problem.theta_star_frac=" << problem.theta_star_frac << "\n"
     << "problem.v_mode=" << problem.v_mode << "\n"
     << "problem.v_seed=" << problem.v_seed << "\n"
     << "problem.sigma2_override=" << problem.sigma2_override << "\n"
     << "problem.delta_override=" << problem.delta_override << "\n"
     << "geometry.kind=" << geometry.kind << "\n"
     << "geometry.p=" << geometry.p << "\n"
     << "domain.q=" << domain.q << "\n"
     << "domain.radius=" << domain.radius << "\n"
     << "estimator.kind=" << estimator.kind << "\n"
     << "estimator.dist=" << estimator.dist << "\n"
     << "estimator.dist1=" << estimator.dist1 << "\n"
     << "estimator.dist2=" << estimator.dist2 << "\n"
     << "schedule.family=" << schedule.family << "\n"
     << "schedule.alpha_mult=" << schedule.alpha_mult << "\n"
     << "schedule.u_mult=" << schedule.u_mult << "\n";
  os << "sweep.d=";
  for (size_t i = 0; i < d_grid.size(); ++i) os << (i ? "," : "") << d_grid[i];
  os << "\nsweep.T=";
  for (size_t i = 0; i < T_grid.size(); ++i) os << (i ? "," : "") << T_grid[i];
  os << "\nsweep.m=";
  for (size_t i = 0; i < m_grid.size(); ++i) os << (i ? "," : "") << m_grid[i];
  os << "\nsweep.alpha=";
  const auto ag = effective_alpha_grid();
  for (size_t i = 0; i < ag.size(); ++i) os << (i ? "," : "") << ag[i];
  os << "\nsweep.replications=" << replications
     << "\nsweep.master_seed=" << master_seed << "\n";
  return os.str();
}

inline std::string SweepConfig::digest() const {
  std::ostringstream os;
  os << std::hex << detail::fnv1a64(canonical_text());
  return os.str();
}

// Parses the key/value-with-sections config format. Lines are either
// `[section]` headers or `key = value`; `#` starts a comment. Unknown
// sections or keys are hard errors.
inline SweepConfig parse_config_text(const std::string& text) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "geometry" &&
          section != "domain" && section != "estimator" &&
          section != "schedule" && section != "sweep")
        throw ConfigError("unknown config section '" + section + "'");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    const std::string full = section + "." + key;
    using detail::parse_double;
    using detail::parse_int;

    if (full == "problem.kind") cfg.problem.kind = val;
    else if (full == "problem.sigma_noise") cfg.problem.sigma_noise = parse_double(full, val);
    else if (full == "problem.sigma_noise_scale") cfg.problem.sigma_noise_scale = val;
    else if (full == "problem.L") cfg.problem.L = parse_double(full, val);
    else if (full == "problem.q") cfg.problem.q = val == "inf" ? kInf : parse_double(full, val);
    else if (full == "problem.p") cfg.problem.p = val == "inf" ? kInf : parse_double(full, val);
    else if (full == "problem.sigma") cfg.problem.sigma = parse_double(full, val);
    else if (full == "problem.theta_star_frac") cfg.problem.theta_star_frac = parse_double(full, val);
    else if (full == "problem.v_mode") cfg.problem.v_mode = val;
    else if (full == "problem.v_seed") cfg.problem.v_seed = static_cast<std::uint64_t>(parse_int(full, val));
    else if (full == "problem.sigma2_override") cfg.problem.sigma2_override = parse_double(full, val);
    else if (full == "problem.delta_override") cfg.problem.delta_override = parse_double(full, val);
    else if (full == "geometry.kind") cfg.geometry.kind = val;
    else if (full == "geometry.p") cfg.geometry.p = parse_double(full, val);
    else if (full == "domain.q") cfg.domain.q = val == "inf" ? kInf : parse_double(full, val);
    else if (full == "domain.radius") cfg.domain.radius = parse_double(full, val);
    else if (full == "estimator.kind") cfg.estimator.kind = val;
    else if (full == "estimator.dist") cfg.estimator.dist = val;
    else if (full == "estimator.dist1") cfg.estimator.dist1 = val;
    else if (full == "estimator.dist2") cfg.estimator.dist2 = val;
    else if (full == "schedule.family") cfg.schedule.family = val;
    else if (full == "schedule.alpha_mult") cfg.schedule.alpha_mult = parse_double(full, val);
    else if (full == "schedule.u_mult") cfg.schedule.u_mult = parse_double(full, val);
    else if (full == "sweep.d") cfg.d_grid = detail::parse_list<int>(full, val, parse_int);
    else if (full == "sweep.T") cfg.T_grid = detail::parse_list<long long>(full, val, parse_int);
    else if (full == "sweep.m") cfg.m_grid = detail::parse_list<int>(full, val, parse_int);
    else if (full == "sweep.alpha") cfg.alpha_grid = detail::parse_list<double>(full, val, parse_double);
    else if (full == "sweep.replications") cfg.replications = static_cast<int>(parse_int(full, val));
    else if (full == "sweep.master_seed") cfg.master_seed = static_cast<std::uint64_t>(parse_int(full, val));
    else if (full == "sweep.output") cfg.output_path = val;
    else throw ConfigError("unknown config key '" + full + "'");
  }
  cfg.validate();
  return cfg;
}

inline SweepConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace zo
