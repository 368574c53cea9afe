#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "zo/errors.hpp"
#include "zo/harness/sweep.hpp"

namespace zo {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  int n_points = 0;
};

// Least-squares fit of log y on log x. Exact (to roundoff) on power-law
// input.
inline FitResult fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2)
    throw DataError("fit: need at least 2 distinct x values");
  const int n = static_cast<int>(xy.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : xy) {
    if (!(x > 0.0)) throw DataError("fit: x values must be positive");
    if (!(y > 0.0)) throw DataError("fit: gaps must be positive (log undefined)");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : xy) {
    const double dx = std::log(x) - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DataError("fit: need at least 2 distinct x values");
  FitResult r;
  r.n_points = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  if (n > 2) {
    const double ss_res = std::max(0.0, syy - r.slope * sxy);
    r.stderr_ = std::sqrt(ss_res / (n - 2) / sxx);
  }
  return r;
}

// Groups rows by the chosen field (T or d), takes the arithmetic mean gap
// per group, and fits log(mean gap) against log(x).
inline FitResult fit_rate(const std::vector<SweepRow>& rows,
                          const std::string& x_field) {
  if (x_field != "T" && x_field != "d")
    throw ConfigError("fit_rate: x_field must be 'T' or 'd'");
  std::map<double, std::pair<double, long long>> groups;
  for (const SweepRow& r : rows) {
    const double x = x_field == "T" ? static_cast<double>(r.T)
                                    : static_cast<double>(r.d);
    auto& [sum, count] = groups[x];
    sum += r.final_gap;
    ++count;
  }
  std::vector<std::pair<double, double>> xy;
  xy.reserve(groups.size());
  for (const auto& [x, sc] : groups)
    xy.emplace_back(x, sc.first / sc.second);
  return fit_loglog(xy);
}

enum class BoundKind { l2, l2_multi, linf };

inline BoundKind bound_kind_from(const std::string& s) {
  if (s == "l2") return BoundKind::l2;
  if (s == "l2-multi" || s == "l2_multi") return BoundKind::l2_multi;
  if (s == "linf") return BoundKind::linf;
  throw ConfigError("unknown bound kind '" + s + "'");
}

struct LowerBoundQuery {
  BoundKind bound = BoundKind::l2;
  int d = 1;
  long long T = 1;
  double q = 2.0;
  double R = 1.0;
  double L = 1.0;
  int m = 1;
};

// Minimax lower-bound reference values:
//   l2        (1/12)(1 - 1/q) L R / sqrt(T)   * min{d^(1-1/q), T^(1-1/q)}
//   l2-multi  (1/10)(1 - 1/q) L R / sqrt(mT)  * min{d^(1-1/q), T^(1-1/q)}
//   linf      (1/24) L R / sqrt(T) * min{sqrt(T/log 3T), sqrt(d/log 3d)}
// For q = 1 the l2 bounds are vacuous and evaluate to 0.
inline double lower_bound_value(const LowerBoundQuery& qr) {
  if (qr.d < 1 || qr.T < 1 || !(qr.R > 0.0) || !(qr.L > 0.0) || qr.m < 1 ||
      !(qr.q >= 1.0))
    throw ConfigError("lower_bound_value: invalid parameters");
  const double T = static_cast<double>(qr.T);
  const double d = static_cast<double>(qr.d);
  const double inv_q = std::isinf(qr.q) ? 0.0 : 1.0 / qr.q;
  switch (qr.bound) {
    case BoundKind::l2:
    case BoundKind::l2_multi: {
      const double c = qr.bound == BoundKind::l2 ? 1.0 / 12.0 : 1.0 / 10.0;
      const double eff_T =
          qr.bound == BoundKind::l2_multi ? qr.m * T : T;
      const double dim_term =
          std::min(std::pow(d, 1.0 - inv_q), std::pow(T, 1.0 - inv_q));
      return c * (1.0 - inv_q) * qr.L * qr.R / std::sqrt(eff_T) * dim_term;
    }
    case BoundKind::linf: {
      const double t_term = std::sqrt(T / std::log(3.0 * T));
      const double d_term = std::sqrt(d / std::log(3.0 * d));
      return (1.0 / 24.0) * qr.L * qr.R / std::sqrt(T) *
             std::min(t_term, d_term);
    }
  }
  throw ConfigError("lower_bound_value: unknown bound kind");
}

struct SandwichReport {
  double measured_mean_gap = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool ok = false;
  bool applicable = true;  // false for the degenerate T = 1 edge
  int replications = 0;
  int d = 1;
  long long T = 1;
};

// Runs the Gaussian-linear hard instance and checks that the measured mean
// gap (over random sign vectors v and seeds) lies between the minimax
// lower-bound value (with 0.8 Monte-Carlo slack) and the smooth-theorem
// upper bound evaluated with the run's constants.
inline SandwichReport sandwich_report(const SweepConfig& cfg) {
  if (cfg.problem.kind != "gaussian_linear")
    throw ConfigError("sandwich: requires the gaussian_linear hard instance");
  if (cfg.problem.v_mode != "per_replication")
    throw ConfigError("sandwich: requires v_mode = per_replication");
  if (cfg.replications < 20)
    throw ConfigError("sandwich: requires replications >= 20");
  if (cfg.d_grid.size() != 1 || cfg.T_grid.size() != 1 ||
      cfg.m_grid.size() != 1 || cfg.effective_alpha_grid().size() != 1)
    throw ConfigError("sandwich: requires a single grid point");

  const std::vector<SweepRow> rows = run_sweep(cfg);
  double sum = 0.0;
  for (const SweepRow& r : rows) sum += r.final_gap;

  const int d = cfg.d_grid.front();
  const long long T = cfg.T_grid.front();
  const int m = cfg.m_grid.front();
  SandwichReport rep;
  rep.measured_mean_gap = sum / rows.size();
  rep.replications = cfg.replications;
  rep.d = d;
  rep.T = T;

  LowerBoundQuery lb;
  lb.bound = m > 1 ? BoundKind::l2_multi : BoundKind::l2;
  lb.d = d;
  lb.T = T;
  lb.q = cfg.problem.q;
  lb.R = cfg.domain.radius;  // the lq-ball radius, not the Bregman radius
  lb.L = cfg.problem.L;
  lb.m = m;
  rep.lower = lower_bound_value(lb);

  const ProblemInstance problem =
      build_problem(cfg.problem, cfg.domain, d, T, /*v_seed=*/0);
  const ProxGeometry geom = build_geometry(cfg.geometry, d);
  const Domain dom{cfg.domain.q, cfg.domain.radius, d};
  const EstimatorConfig est = build_estimator(cfg.estimator, d, m);
  const Schedule sched = derive_schedule(
      problem, geom, dom, est, schedule_family_from(cfg.schedule.family),
      cfg.effective_alpha_grid().front(), cfg.schedule.u_mult);
  rep.upper = theorem1_bound(sched, T);

  rep.applicable = T > 1;
  rep.ok = !rep.applicable || (0.8 * rep.lower <= rep.measured_mean_gap &&
                               rep.measured_mean_gap <= rep.upper);
  return rep;
}

}  // namespace zo
