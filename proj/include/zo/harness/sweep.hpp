#pragma once

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "zo/errors.hpp"
#include "zo/harness/config.hpp"
#include "zo/optimizer.hpp"

namespace zo {

inline SmoothingKind smoothing_kind_from(const std::string& s) {
  if (s == "gaussian") return SmoothingKind::gaussian;
  if (s == "ball") return SmoothingKind::ball;
  if (s == "sphere") return SmoothingKind::sphere;
  if (s == "hypercube") return SmoothingKind::hypercube;
  throw ConfigError("unknown smoothing distribution '" + s + "'");
}

inline EstimatorKind estimator_kind_from(const std::string& s) {
  if (s == "two_point") return EstimatorKind::two_point;
  if (s == "two_point_avg") return EstimatorKind::two_point_avg;
  if (s == "double_smoothed") return EstimatorKind::double_smoothed;
  if (s == "full_info") return EstimatorKind::full_info;
  throw ConfigError("unknown estimator kind '" + s + "'");
}

inline ScheduleFamily schedule_family_from(const std::string& s) {
  if (s == "smooth") return ScheduleFamily::smooth;
  if (s == "nonsmooth") return ScheduleFamily::non_smooth;
  if (s == "full_info") return ScheduleFamily::full_info;
  throw ConfigError("unknown schedule family '" + s + "'");
}

inline ProxGeometry build_geometry(const GeometrySpec& gs, int d) {
  if (gs.kind == "euclidean") return ProxGeometry::euclidean();
  if (gs.kind == "pnorm")
    return gs.p > 0 ? ProxGeometry::pnorm_with(gs.p)
                    : ProxGeometry::pnorm_for_dim(d);
  throw ConfigError("unknown geometry kind '" + gs.kind + "'");
}

// theta* for the synthetic objectives: frac * radius along the normalized
// all-ones direction (feasible for any frac in [0, 1]).
inline Vec theta_star_for(const ProblemSpec& ps, const DomainSpec& ds, int d) {
  Vec ones = Vec::Ones(d);
  const double n = lq_norm(ones, ds.q);
  return (ps.theta_star_frac * ds.radius / n) * ones;
}

inline double effective_sigma_noise(const ProblemSpec& ps, int d) {
  if (ps.sigma_noise_scale == "fixed") return ps.sigma_noise;
  if (ps.sigma_noise_scale == "inv_sqrt_d")
    return ps.sigma_noise / std::sqrt(static_cast<double>(d));
  throw ConfigError("unknown sigma_noise_scale '" + ps.sigma_noise_scale +
                    "'");
}

inline ProblemInstance build_problem(const ProblemSpec& ps,
                                     const DomainSpec& ds, int d, long long T,
                                     std::uint64_t v_seed) {
  Domain dom{ds.q, ds.radius, d};
  if (ps.kind == "smooth_quadratic")
    return make_smooth_quadratic(d, theta_star_for(ps, ds, d), dom,
                                 effective_sigma_noise(ps, d));
  if (ps.kind == "nonsmooth_norm")
    return make_nonsmooth_norm(d, theta_star_for(ps, ds, d), ps.L, dom,
                               effective_sigma_noise(ps, d));
  if (ps.kind == "gaussian_linear") {
    const std::uint64_t sv = ps.v_mode == "fixed" ? ps.v_seed : v_seed;
    return make_gaussian_linear(d, ps.L, T, ps.q, ds.radius, sv,
                                ps.sigma2_override, ps.delta_override);
  }
  if (ps.kind == "l1_median") {
    const std::uint64_t sv = ps.v_mode == "fixed" ? ps.v_seed : v_seed;
    return make_l1_median(d, ps.L, ps.p, T, ps.sigma, ps.q, ds.radius, sv);
  }
  throw ConfigError("unknown problem kind '" + ps.kind + "'");
}

inline EstimatorConfig build_estimator(const EstimatorSpec& es, int d, int m) {
  EstimatorConfig ec;
  ec.kind = estimator_kind_from(es.kind);
  ec.m = m;
  ec.dist = {smoothing_kind_from(es.dist), d};
  ec.dist1 = {smoothing_kind_from(es.dist1), d};
  ec.dist2 = {smoothing_kind_from(es.dist2), d};
  return ec;
}

// Schedule constants for a run. R is the effective Bregman radius of the
// domain; s_d and M come from the smoothing distribution. For the m-point
// average the dimension factor drops to max{s_d / m, 1}, matching the
// multi-evaluation corollary's step sizes.
inline ScheduleConstants derive_constants(const ProblemInstance& problem,
                                          const ProxGeometry& geom,
                                          const Domain& dom,
                                          const EstimatorConfig& est) {
  ScheduleConstants c;
  c.R = dom.effective_radius(geom);
  c.L = problem.L;
  c.L1 = problem.L1;
  c.d = problem.dim;
  if (est.kind == EstimatorKind::two_point ||
      est.kind == EstimatorKind::two_point_avg) {
    const GeometryConstants gc = geometry_constants(est.dist, geom);
    c.s_d = gc.s_d;
    c.M = gc.M;
    if (est.kind == EstimatorKind::two_point_avg)
      c.s_d = std::max(gc.s_d / est.m, 1.0);
  }
  return c;
}

inline Schedule derive_schedule(const ProblemInstance& problem,
                                const ProxGeometry& geom, const Domain& dom,
                                const EstimatorConfig& est,
                                ScheduleFamily family, double alpha_mult,
                                double u_mult) {
  Schedule s;
  s.family = family;
  s.alpha_mult = alpha_mult;
  s.u_mult = u_mult;
  s.constants = derive_constants(problem, geom, dom, est);
  return s;
}

struct SweepRow {
  std::string config_digest;
  std::string problem;
  std::string geometry;
  std::string estimator;
  std::string schedule;
  int d = 1;
  long long T = 1;
  int m = 1;
  double alpha_mult = 1.0;
  double u_mult = 1.0;
  int replication = 0;
  std::uint64_t seed = 0;
  double final_gap = 0.0;
  long long evaluations_total = 0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kCsvHeader =
    "config_digest,problem,geometry,estimator,schedule,d,T,m,alpha_mult,"
    "u_mult,replication,seed,final_gap,evaluations_total,wall_time_s";

inline int worker_count_from_env() {
  const char* env = std::getenv("ZO_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || n < 1)
    throw ConfigError("ZO_WORKERS must be a positive integer");
  return static_cast<int>(n);
}

// Executes the grid x replications. Rows are computed concurrently up to
// the worker count but always returned in grid order; each row's seed
// depends only on (master_seed, grid_index, replication), so the output is
// independent of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg,
                                       int workers = 0) {
  cfg.validate();
  if (workers <= 0) workers = worker_count_from_env();
  const std::string digest = cfg.digest();
  const auto alpha_grid = cfg.effective_alpha_grid();

  struct Cell {
    int d;
    long long T;
    int m;
    double alpha;
    long long grid_index;
    int replication;
  };
  std::vector<Cell> cells;
  long long grid_index = 0;
  for (int d : cfg.d_grid)
    for (long long T : cfg.T_grid)
      for (int m : cfg.m_grid)
        for (double alpha : alpha_grid) {
          for (int rep = 0; rep < cfg.replications; ++rep)
            cells.push_back({d, T, m, alpha, grid_index, rep});
          ++grid_index;
        }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex error_mu;

  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      const Cell& c = cells[i];
      try {
        const std::uint64_t seed =
            mix64(cfg.master_seed, static_cast<std::uint64_t>(c.grid_index),
                  static_cast<std::uint64_t>(c.replication));
        const ProblemInstance problem =
            build_problem(cfg.problem, cfg.domain, c.d, c.T, seed);
        const ProxGeometry geom = build_geometry(cfg.geometry, c.d);
        const Domain dom{cfg.domain.q, cfg.domain.radius, c.d};
        const EstimatorConfig est = build_estimator(cfg.estimator, c.d, c.m);
        const Schedule sched =
            derive_schedule(problem, geom, dom, est,
                            schedule_family_from(cfg.schedule.family), c.alpha,
                            cfg.schedule.u_mult);
        RunOptions opts;
        opts.config_digest = digest;
        const RunRecord rec = run(problem, geom, dom, est, sched, c.T, seed, opts);

        SweepRow& row = rows[i];
        row.config_digest = digest;
        row.problem = problem.name;
        row.geometry = cfg.geometry.kind;
        row.estimator = cfg.estimator.kind;
        row.schedule = cfg.schedule.family;
        row.d = c.d;
        row.T = c.T;
        row.m = c.m;
        row.alpha_mult = c.alpha;
        row.u_mult = cfg.schedule.u_mult;
        row.replication = c.replication;
        row.seed = seed;
        row.final_gap = rec.final_gap;
        row.evaluations_total = rec.evaluations_total;
        row.wall_time_s = rec.wall_time;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) error_msg = e.what();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(cells.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw NumericalError("sweep row failed: " + error_msg);
  return rows;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// CSV body. Row wall_time_s is written as 0 so re-runs are byte-identical;
// measured timing goes into the excluded timestamp header (see README).
inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& out,
                      const std::string& timestamp_header = "") {
  if (!timestamp_header.empty()) out << "# " << timestamp_header << "\n";
  out << kCsvHeader << "\n";
  for (const SweepRow& r : rows) {
    out << r.config_digest << ',' << r.problem << ',' << r.geometry << ','
        << r.estimator << ',' << r.schedule << ',' << r.d << ',' << r.T << ','
        << r.m << ',' << format_double(r.alpha_mult) << ','
        << format_double(r.u_mult) << ',' << r.replication << ',' << r.seed
        << ',' << format_double(r.final_gap) << ',' << r.evaluations_total
        << ',' << "0.000000" << "\n";
  }
}

inline std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  bool header_seen = false;
  std::vector<SweepRow> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (detail::trim(line) != kCsvHeader)
        throw DataError("CSV schema mismatch: expected header '" +
                        std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 15)
      throw DataError("CSV row " + std::to_string(lineno) +
                      ": expected 15 fields, got " + std::to_string(f.size()));
    SweepRow r;
    try {
      r.config_digest = f[0];
      r.problem = f[1];
      r.geometry = f[2];
      r.estimator = f[3];
      r.schedule = f[4];
      r.d = std::stoi(f[5]);
      r.T = std::stoll(f[6]);
      r.m = std::stoi(f[7]);
      r.alpha_mult = std::stod(f[8]);
      r.u_mult = std::stod(f[9]);
      r.replication = std::stoi(f[10]);
      r.seed = std::stoull(f[11]);
      r.final_gap = std::stod(f[12]);
      r.evaluations_total = std::stoll(f[13]);
      r.wall_time_s = std::stod(f[14]);
    } catch (const std::exception&) {
      throw DataError("CSV row " + std::to_string(lineno) +
                      ": malformed field");
    }
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw DataError("CSV has no header");
  return rows;
}

inline std::vector<SweepRow> read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open CSV file: " + path);
  return read_csv(f);
}

}  // namespace zo
