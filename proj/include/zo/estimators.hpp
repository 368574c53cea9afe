#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "zo/errors.hpp"
#include "zo/problems.hpp"
#include "zo/smoothing.hpp"

namespace zo {

enum class EstimatorKind { two_point, two_point_avg, double_smoothed, full_info };

inline std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::two_point: return "two_point";
    case EstimatorKind::two_point_avg: return "two_point_avg";
    case EstimatorKind::double_smoothed: return "double_smoothed";
    case EstimatorKind::full_info: return "full_info";
  }
  return "?";
}

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::two_point;
  int m = 1;                                       // two_point_avg only
  SmoothingDistribution dist;                      // two_point / two_point_avg
  SmoothingDistribution dist1, dist2;              // double_smoothed

  void validate(int problem_dim) const {
    switch (kind) {
      case EstimatorKind::two_point:
        if (dist.dim != problem_dim)
          throw ConfigError("estimator: smoothing dimension mismatch");
        break;
      case EstimatorKind::two_point_avg:
        if (m < 1) throw ConfigError("estimator: m must be >= 1");
        if (dist.dim != problem_dim)
          throw ConfigError("estimator: smoothing dimension mismatch");
        break;
      case EstimatorKind::double_smoothed:
        if (dist1.dim != problem_dim || dist2.dim != problem_dim)
          throw ConfigError("estimator: smoothing dimension mismatch");
        if (!valid_double_smoothing_pair(dist1.kind, dist2.kind))
          throw ConfigError(
              "estimator: (dist1, dist2) must be (gaussian, gaussian), "
              "(ball, ball) or (ball, sphere)");
        break;
      case EstimatorKind::full_info:
        break;
    }
  }
};

struct GradEstimate {
  Vec g;
  int evaluations_used = 0;
};

namespace detail {
inline double checked_eval(double v) {
  if (!std::isfinite(v))
    throw NumericalError("problem evaluation returned a non-finite value");
  return v;
}
}  // namespace detail

// g = (F(theta + u Z; x) - F(theta; x)) / u * Z, two evaluations at the
// same sample x.
template <class F>
GradEstimate estimate_two_point(F&& f, const Vec& theta, double u,
                                const Vec& z, const Vec& x) {
  if (!(u > 0.0)) throw ContractViolation("estimate_two_point: u must be > 0");
  const double base = detail::checked_eval(f(theta, x));
  const double shifted = detail::checked_eval(f(theta + u * z, x));
  return {Vec((shifted - base) / u * z), 2};
}

// Average of m directional estimates sharing the base evaluation
// F(theta; x): m + 1 evaluations in total.
template <class F>
GradEstimate estimate_two_point_avg(F&& f, const Vec& theta, double u,
                                    std::span<const Vec> zs, const Vec& x) {
  if (!(u > 0.0))
    throw ContractViolation("estimate_two_point_avg: u must be > 0");
  if (zs.empty())
    throw ContractViolation("estimate_two_point_avg: m must be >= 1");
  const double base = detail::checked_eval(f(theta, x));
  Vec g = Vec::Zero(theta.size());
  for (const Vec& z : zs) {
    const double shifted = detail::checked_eval(f(theta + u * z, x));
    g += (shifted - base) / u * z;
  }
  g /= static_cast<double>(zs.size());
  return {std::move(g), static_cast<int>(zs.size()) + 1};
}

// g = (F(theta + u1 Z1 + u2 Z2; x) - F(theta + u1 Z1; x)) / u2 * Z2; the
// outer perturbation smooths the objective, the inner one estimates a
// direction.
template <class F>
GradEstimate estimate_double_smoothed(F&& f, const Vec& theta, double u1,
                                      double u2, const Vec& z1, const Vec& z2,
                                      const Vec& x) {
  if (!(u2 > 0.0))
    throw ContractViolation("estimate_double_smoothed: u2 must be > 0");
  const Vec outer = theta + u1 * z1;
  const double base = detail::checked_eval(f(outer, x));
  const double shifted = detail::checked_eval(f(outer + u2 * z2, x));
  return {Vec((shifted - base) / u2 * z2), 2};
}

// Monte-Carlo estimate of the smoothed value f_u(theta) = E[f(theta + uZ)].
template <class F>
double estimate_smoothed_value(F&& f, const Vec& theta, double u,
                               const SmoothingDistribution& dist1, long long N,
                               Rng& rng) {
  if (N < 1000)
    throw ContractViolation("estimate_smoothed_value: N must be >= 1000");
  if (dist1.kind != SmoothingKind::gaussian &&
      dist1.kind != SmoothingKind::ball)
    throw ContractViolation(
        "estimate_smoothed_value: dist1 must be gaussian or ball");
  double sum = 0.0;
  for (long long i = 0; i < N; ++i)
    sum += detail::checked_eval(f(theta + u * sample(dist1, rng)));
  return sum / N;
}

// Empirical check of the estimator lemmas at a fixed point theta.
//   bias_norm           ||mean of N estimates - grad f(theta)||_*
//   lemma_bound         u L1 * E[||Z||^2 ||Z||_*] / 2          (smooth case)
//   second_moment       empirical E ||g||_*^2
//   second_moment_bound 2 s(d) E||dF||_*^2 + u^2 L1^2 M^2 / 2  (smooth case)
//   ns_ratio            E||g||^2 / (L^2 d (sqrt(u2/u1) d + log 2d))
// Bound fields are NaN where the theory gives no explicit constant.
struct BiasProbeResult {
  double bias_norm = 0.0;
  double bias_stderr = 0.0;
  double lemma_bound = kNaN;
  double second_moment = 0.0;
  double second_moment_stderr = 0.0;
  double second_moment_bound = kNaN;
  double ns_ratio = kNaN;
};

inline BiasProbeResult bias_probe(const ProblemInstance& problem,
                                  const EstimatorConfig& est, const Vec& theta,
                                  double u1, double u2, long long N, Rng& rng) {
  if (N < 10000) throw ContractViolation("bias_probe: N must be >= 10^4");
  if (!problem.grad_exact)
    throw ConfigError("bias_probe: problem must expose an exact gradient");
  if (est.kind != EstimatorKind::two_point &&
      est.kind != EstimatorKind::double_smoothed)
    throw ConfigError("bias_probe: supports two_point and double_smoothed");
  est.validate(problem.dim);
  const ProxGeometry geom = problem.norm_tag == NormTag::l2
                                ? ProxGeometry::euclidean()
                                : ProxGeometry::pnorm_for_dim(problem.dim);

  const int d = problem.dim;
  Vec mean = Vec::Zero(d);
  Vec m2 = Vec::Zero(d);  // per-coordinate sum of squares
  double sq_sum = 0.0, sq_sumsq = 0.0, grad_sq_sum = 0.0;
  for (long long i = 0; i < N; ++i) {
    const Vec x = problem.sample(rng);
    GradEstimate ge;
    if (est.kind == EstimatorKind::two_point) {
      ge = estimate_two_point(problem.eval, theta, u1, sample(est.dist, rng),
                              x);
    } else {
      ge = estimate_double_smoothed(problem.eval, theta, u1, u2,
                                    sample(est.dist1, rng),
                                    sample(est.dist2, rng), x);
    }
    mean += ge.g;
    m2 += ge.g.cwiseProduct(ge.g);
    const double sq = std::pow(geom.dual_norm(ge.g), 2);
    sq_sum += sq;
    sq_sumsq += sq * sq;
    if (problem.subgrad)
      grad_sq_sum += std::pow(geom.dual_norm(problem.subgrad(theta, x)), 2);
  }
  mean /= static_cast<double>(N);
  BiasProbeResult out;
  out.bias_norm = geom.dual_norm(mean - problem.grad_exact(theta));
  double var_sum = 0.0;
  for (int j = 0; j < d; ++j)
    var_sum += std::max(0.0, m2[j] / N - mean[j] * mean[j]);
  out.bias_stderr = std::sqrt(var_sum / N);
  out.second_moment = sq_sum / N;
  out.second_moment_stderr = std::sqrt(
      std::max(0.0, sq_sumsq / N - out.second_moment * out.second_moment) / N);

  if (est.kind == EstimatorKind::two_point) {
    const GeometryConstants gc = geometry_constants(est.dist, geom);
    const double zmom = sqnorm_dualnorm_moment(est.dist, geom);
    if (!std::isnan(problem.L1)) {
      out.lemma_bound = u1 * problem.L1 * 0.5 * zmom;
      if (problem.subgrad)
        out.second_moment_bound = 2.0 * gc.s_d * (grad_sq_sum / N) +
                                  0.5 * u1 * u1 * problem.L1 * problem.L1 *
                                      gc.M * gc.M;
    }
  } else {
    const double L = problem.L;
    out.ns_ratio = out.second_moment /
                   (L * L * d *
                    (std::sqrt(u2 / u1) * d + std::log(2.0 * d)));
  }
  return out;
}

}  // namespace zo
