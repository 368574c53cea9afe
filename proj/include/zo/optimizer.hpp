#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zo/errors.hpp"
#include "zo/estimators.hpp"
#include "zo/geometry.hpp"
#include "zo/problems.hpp"
#include "zo/smoothing.hpp"

namespace zo {

enum class ScheduleFamily { smooth, non_smooth, full_info };

inline std::string to_string(ScheduleFamily f) {
  switch (f) {
    case ScheduleFamily::smooth: return "smooth";
    case ScheduleFamily::non_smooth: return "nonsmooth";
    case ScheduleFamily::full_info: return "full_info";
  }
  return "?";
}

struct ScheduleConstants {
  double R = 1.0;
  double L = 1.0;
  double L1 = kNaN;
  double s_d = 1.0;
  double M = 1.0;
  int d = 1;
};

// Step and perturbation sizes:
//   smooth      alpha_t = a R / (2 L sqrt(s_d) sqrt(t)),
//               u_t = u L sqrt(s_d) / (L1 M t)
//   non_smooth  alpha_t = a R / (L sqrt(d log 2d) sqrt(t)),
//               u1_t = u R / t,  u2_t = u R / (d^2 t^2)
//   full_info   alpha_t = a / sqrt(t)
// u values are clamped below at u_floor = 1e-10 R; problems with L1 = 0
// (linear) run at the floor, where the estimator is exact anyway.
struct Schedule {
  ScheduleFamily family = ScheduleFamily::smooth;
  double alpha_mult = 1.0;
  double u_mult = 1.0;
  ScheduleConstants constants;

  double u_floor() const { return 1e-10 * constants.R; }
};

struct StepSizes {
  double alpha = 0.0;
  double u1 = kNaN;  // the smooth family's u_t
  double u2 = kNaN;
};

inline StepSizes schedule_at(const Schedule& s, long long t) {
  if (t < 1) throw ContractViolation("schedule_at: t must be >= 1");
  const auto& c = s.constants;
  const double rt = std::sqrt(static_cast<double>(t));
  StepSizes out;
  switch (s.family) {
    case ScheduleFamily::smooth: {
      out.alpha = s.alpha_mult * c.R / (2.0 * c.L * std::sqrt(c.s_d) * rt);
      double u;
      if (!(c.L1 > 0.0) || std::isnan(c.L1)) {
        u = s.u_floor();
      } else {
        u = s.u_mult * c.L * std::sqrt(c.s_d) / (c.L1 * c.M * t);
      }
      out.u1 = std::max(u, s.u_floor());
      return out;
    }
    case ScheduleFamily::non_smooth: {
      if (c.d < 2)
        throw ConfigError("non-smooth schedule requires dimension >= 2");
      out.alpha = s.alpha_mult * c.R /
                  (c.L * std::sqrt(c.d * std::log(2.0 * c.d)) * rt);
      const double dd = static_cast<double>(c.d) * c.d;
      out.u1 = std::max(s.u_mult * c.R / t, s.u_floor());
      out.u2 = std::max(s.u_mult * c.R / (dd * t * t),
                        std::min(s.u_floor(), out.u1 / 2.0));
      return out;
    }
    case ScheduleFamily::full_info:
      out.alpha = s.alpha_mult / rt;
      return out;
  }
  throw ConfigError("schedule_at: unknown family");
}

// Expected-gap bound of the smooth-case theorem:
//   2 R L sqrt(s_d) max{a, 1/a} / sqrt(T) + a u^2 R L sqrt(s_d) / T
//   + u R L sqrt(s_d) log(2T) / T.
inline double theorem1_bound(const Schedule& s, long long T) {
  if (s.family != ScheduleFamily::smooth)
    throw ConfigError("theorem1_bound: requires the smooth family");
  if (T < 1) throw ContractViolation("theorem1_bound: T must be >= 1");
  const auto& c = s.constants;
  const double base = c.R * c.L * std::sqrt(c.s_d);
  const double a = s.alpha_mult, u = s.u_mult;
  return 2.0 * base / std::sqrt(double(T)) * std::max(a, 1.0 / a) +
         a * u * u * base / T + u * base * std::log(2.0 * T) / T;
}

// Shape of the non-smooth bound with the unspecified universal constant set
// to 1: max{a,1/a} R L sqrt(d log 2d) / sqrt(T) + u R L sqrt(d) log(2T) / T.
// A scaling reference, not an absolute bound.
inline double theorem2_bound_shape(const Schedule& s, long long T) {
  if (s.family != ScheduleFamily::non_smooth)
    throw ConfigError("theorem2_bound_shape: requires the non-smooth family");
  if (T < 3) throw ContractViolation("theorem2_bound_shape: T must be >= 3");
  const auto& c = s.constants;
  const double a = s.alpha_mult, u = s.u_mult;
  return std::max(a, 1.0 / a) * c.R * c.L *
             std::sqrt(c.d * std::log(2.0 * c.d)) / std::sqrt(double(T)) +
         u * c.R * c.L * std::sqrt(double(c.d)) * std::log(2.0 * T) / T;
}

struct RunRecord {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<std::pair<long long, double>> trace;  // (t, gap) on {1,2,4,...,T}
  Vec final_avg_iterate;
  double final_gap = 0.0;
  long long evaluations_total = 0;
  double wall_time = 0.0;
};

struct RunOptions {
  std::string config_digest;
  // Test hook, called with (t, theta_t) before each step. Empty by default.
  std::function<void(long long, const Vec&)> observer;
};

// The stochastic mirror-descent driver. Each iteration samples X_t, the
// perturbation(s), forms the gradient estimate and applies the mirror step;
// gap(t) = f(avg of theta_1..theta_t) - f* is recorded on a logarithmic
// grid. Deterministic for fixed inputs (wall_time aside).
inline RunRecord run(const ProblemInstance& problem, const ProxGeometry& geom,
                     const Domain& dom, const EstimatorConfig& est,
                     const Schedule& sched, long long T, std::uint64_t seed,
                     const RunOptions& opts = {}) {
  if (T < 1) throw ContractViolation("run: T must be >= 1");
  if (problem.dim != dom.dim) throw ConfigError("run: dimension mismatch");
  est.validate(problem.dim);
  switch (est.kind) {
    case EstimatorKind::two_point:
    case EstimatorKind::two_point_avg:
      if (sched.family != ScheduleFamily::smooth)
        throw ConfigError("run: two-point estimators use the smooth schedule");
      break;
    case EstimatorKind::double_smoothed:
      if (sched.family != ScheduleFamily::non_smooth)
        throw ConfigError(
            "run: the double-smoothed estimator uses the non-smooth schedule");
      break;
    case EstimatorKind::full_info:
      if (sched.family != ScheduleFamily::full_info)
        throw ConfigError("run: full-info runs use the full-info schedule");
      if (!problem.subgrad)
        throw ConfigError("run: full-info requires a subgradient oracle");
      break;
  }

  const auto t_start = std::chrono::steady_clock::now();
  Rng rng(mix64(seed, 0, 0));
  Vec theta = dom.center();
  Vec avg = Vec::Zero(dom.dim);
  std::vector<Vec> zs(est.kind == EstimatorKind::two_point_avg ? est.m : 0);

  RunRecord rec;
  rec.config_digest = opts.config_digest;
  rec.seed = seed;
  long long next_trace = 1;
  for (long long t = 1; t <= T; ++t) {
    avg += (theta - avg) / static_cast<double>(t);
    if (t == next_trace || t == T) {
      rec.trace.emplace_back(t, problem.f_exact(avg) - problem.optimum.f_star);
      if (t == next_trace) next_trace *= 2;
    }
    if (opts.observer) opts.observer(t, theta);

    const StepSizes ss = schedule_at(sched, t);
    const Vec x = problem.sample(rng);
    Vec g;
    switch (est.kind) {
      case EstimatorKind::two_point: {
        GradEstimate ge =
            estimate_two_point(problem.eval, theta, ss.u1,
                               sample(est.dist, rng), x);
        g = std::move(ge.g);
        rec.evaluations_total += ge.evaluations_used;
        break;
      }
      case EstimatorKind::two_point_avg: {
        for (int i = 0; i < est.m; ++i) zs[i] = sample(est.dist, rng);
        GradEstimate ge = estimate_two_point_avg(
            problem.eval, theta, ss.u1, std::span<const Vec>(zs), x);
        g = std::move(ge.g);
        rec.evaluations_total += ge.evaluations_used;
        break;
      }
      case EstimatorKind::double_smoothed: {
        const Vec z1 = sample(est.dist1, rng);
        const Vec z2 = sample(est.dist2, rng);
        GradEstimate ge = estimate_double_smoothed(problem.eval, theta, ss.u1,
                                                   ss.u2, z1, z2, x);
        g = std::move(ge.g);
        rec.evaluations_total += ge.evaluations_used;
        break;
      }
      case EstimatorKind::full_info:
        g = problem.subgrad(theta, x);
        break;
    }
    if (!is_finite(g))
      throw NumericalError("run: non-finite gradient estimate", 0.0, t);
    theta = md_step(geom, dom, theta, g, ss.alpha);
  }

  rec.final_avg_iterate = avg;
  rec.final_gap = rec.trace.back().second;
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rec;
}

}  // namespace zo
