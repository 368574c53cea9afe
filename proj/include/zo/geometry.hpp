#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "zo/errors.hpp"
#include "zo/vec.hpp"

namespace zo {

enum class GeomKind { euclidean, pnorm };

// Proximal setup for the mirror step. Euclidean uses psi = ||x||_2^2 / 2;
// the p-norm geometry uses psi = ||x||_p^2 / (2(p-1)), which is 1-strongly
// convex with respect to ||.||_p. Gradients are measured in the dual norm
// (l2 for Euclidean, l_inf for the l1/p-norm geometry).
struct ProxGeometry {
  GeomKind kind = GeomKind::euclidean;
  double p = 2.0;

  static ProxGeometry euclidean() { return {GeomKind::euclidean, 2.0}; }

  static ProxGeometry pnorm_with(double p) {
    if (!(p > 1.0)) throw ConfigError("pnorm geometry requires p > 1");
    return {GeomKind::pnorm, p};
  }

  // Default choice p = 1 + 1/log(2d).
  static ProxGeometry pnorm_for_dim(int dim) {
    if (dim < 1) throw ConfigError("pnorm geometry requires dim >= 1");
    return pnorm_with(1.0 + 1.0 / std::log(2.0 * dim));
  }

  double psi(const Vec& x) const {
    if (kind == GeomKind::euclidean) return 0.5 * x.squaredNorm();
    const double n = lq_norm(x, p);
    return n * n / (2.0 * (p - 1.0));
  }

  // grad psi; at x = 0 the p-norm link is defined as the zero vector (the
  // limit), which sidesteps the 0^(p-2) singularity.
  Vec grad_psi(const Vec& x) const {
    if (kind == GeomKind::euclidean) return x;
    const double m = x.lpNorm<Eigen::Infinity>();
    Vec out = Vec::Zero(x.size());
    if (m == 0.0) return out;
    // Scale by the max entry so the powers stay in [0, 1].
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
    const double np_scaled = std::pow(s, 1.0 / p);  // ||x||_p / m
    for (int i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]) / m;
      if (a == 0.0) continue;
      const double mag =
          m * std::pow(a, p - 1.0) * std::pow(np_scaled, 2.0 - p);
      out[i] = (x[i] > 0 ? mag : -mag) / (p - 1.0);
    }
    return out;
  }

  // Inverse link grad psi^{-1}: with q the conjugate exponent,
  // grad(0.5 ||.||_p^2) and grad(0.5 ||.||_q^2) are mutually inverse and
  // 1-homogeneous, so grad psi^{-1}(w) = (p-1) * grad(0.5 ||.||_q^2)(w).
  Vec grad_psi_inverse(const Vec& w) const {
    if (kind == GeomKind::euclidean) return w;
    const double q = p / (p - 1.0);
    const double m = w.lpNorm<Eigen::Infinity>();
    Vec out = Vec::Zero(w.size());
    if (m == 0.0) return out;
    double s = 0.0;
    for (int i = 0; i < w.size(); ++i) s += std::pow(std::abs(w[i]) / m, q);
    const double nq_scaled = std::pow(s, 1.0 / q);
    for (int i = 0; i < w.size(); ++i) {
      const double a = std::abs(w[i]) / m;
      if (a == 0.0) continue;
      const double mag =
          m * std::pow(a, q - 1.0) * std::pow(nq_scaled, 2.0 - q);
      out[i] = (w[i] > 0 ? mag : -mag) * (p - 1.0);
    }
    return out;
  }

  // Norm in which psi is 1-strongly convex.
  double primal_norm(const Vec& v) const {
    return kind == GeomKind::euclidean ? v.norm() : lq_norm(v, p);
  }

  double dual_norm(const Vec& v) const {
    return kind == GeomKind::euclidean ? v.norm()
                                       : v.lpNorm<Eigen::Infinity>();
  }
};

inline double dual_norm(const ProxGeometry& geom, const Vec& v) {
  if (!is_finite(v)) throw InputError("dual_norm: non-finite input");
  return geom.dual_norm(v);
}

// Feasible set, an lq ball. Only q = 2 and q = 1 are supported as mirror
// descent domains; other q appear in problem metadata and bound formulas.
struct Domain {
  double q = 2.0;
  double radius = 1.0;
  int dim = 1;

  bool contains(const Vec& x) const {
    return lq_norm(x, q) <= radius + 1e-12;
  }

  Vec center() const { return Vec::Zero(dim); }

  // Effective radius R with D(theta*, theta) <= R^2 / 2 over the domain:
  // 2r for the Euclidean ball, 2r sqrt(log(2d)) for the p-norm geometry
  // over the l1 ball (from D <= 2 R^2 log(2d)).
  double effective_radius(const ProxGeometry& geom) const {
    if (geom.kind == GeomKind::euclidean) return 2.0 * radius;
    if (q != 1.0)
      throw ConfigError("pnorm geometry is only paired with the l1 ball");
    return 2.0 * radius * std::sqrt(std::log(2.0 * dim));
  }
};

inline double bregman_divergence(const ProxGeometry& geom, const Vec& x,
                                 const Vec& y) {
  if (x.size() != y.size())
    throw ContractViolation("bregman_divergence: dimension mismatch");
  if (!is_finite(x) || !is_finite(y))
    throw InputError("bregman_divergence: non-finite input");
  if (geom.kind == GeomKind::euclidean) return 0.5 * (x - y).squaredNorm();
  return geom.psi(x) - geom.psi(y) - geom.grad_psi(y).dot(x - y);
}

// Euclidean projection onto the l1 ball of the given radius, sort-based.
// Ties broken by a stable sort on magnitude, descending. Returns v
// unchanged (exactly) when it is already feasible.
inline Vec project_l1(const Vec& v, double radius) {
  if (!(radius > 0.0)) throw ContractViolation("project_l1: radius must be > 0");
  if (!is_finite(v)) throw InputError("project_l1: non-finite input");
  const int d = static_cast<int>(v.size());
  if (v.lpNorm<1>() <= radius) return v;
  std::vector<double> a(d);
  for (int i = 0; i < d; ++i) a[i] = std::abs(v[i]);
  std::stable_sort(a.begin(), a.end(), std::greater<double>());
  double prefix = 0.0, tau = 0.0;
  for (int j = 0; j < d; ++j) {
    prefix += a[j];
    const double t = (prefix - radius) / (j + 1);
    if (a[j] > t) tau = t;
  }
  Vec out(d);
  for (int i = 0; i < d; ++i) {
    const double m = std::abs(v[i]) - tau;
    out[i] = m > 0.0 ? (v[i] > 0 ? m : -m) : 0.0;
  }
  return out;
}

namespace detail {

// Bregman projection of the dual point w onto the l1 ball for the p-norm
// geometry: bisection on the Lagrange multiplier of ||theta||_1 <= r.
// The candidate for multiplier lam is grad psi^{-1}(soft(w, alpha*lam)).
inline Vec pnorm_l1_bregman_project(const ProxGeometry& geom, const Vec& w,
                                    double alpha, double radius) {
  const auto shrink = [&](double lam) {
    Vec m(w.size());
    for (int i = 0; i < w.size(); ++i) {
      const double mag = std::abs(w[i]) - alpha * lam;
      m[i] = mag > 0.0 ? (w[i] > 0 ? mag : -mag) : 0.0;
    }
    return geom.grad_psi_inverse(m);
  };
  double lo = 0.0;
  double hi = w.lpNorm<Eigen::Infinity>() / alpha;  // shrinks to 0
  const double tol = 1e-12 * (1.0 + hi);
  int it = 0;
  for (; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shrink(mid).lpNorm<1>() > radius)
      lo = mid;
    else
      hi = mid;
  }
  Vec out = shrink(hi);
  const double overshoot = out.lpNorm<1>() - radius;
  if (overshoot > 1e-8 * (1.0 + radius))
    throw NumericalError("pnorm mirror step: bisection did not converge",
                         overshoot, it);
  return out;
}

}  // namespace detail

// One constrained mirror-descent step:
//   argmin_{theta in dom} <g, theta> + D(theta, theta_t) / alpha.
inline Vec md_step(const ProxGeometry& geom, const Domain& dom,
                   const Vec& theta_t, const Vec& g, double alpha) {
  if (!(alpha > 0.0)) throw ContractViolation("md_step: alpha must be > 0");
  if (theta_t.size() != g.size() || theta_t.size() != dom.dim)
    throw ContractViolation("md_step: dimension mismatch");
  if (!is_finite(theta_t) || !is_finite(g))
    throw InputError("md_step: non-finite input");
  if (!dom.contains(theta_t))
    throw ContractViolation("md_step: theta_t outside the domain");

  if (geom.kind == GeomKind::euclidean) {
    Vec w = theta_t - alpha * g;
    if (dom.q == 2.0) {
      const double n = w.norm();
      if (n > dom.radius) w *= dom.radius / n;
      return w;
    }
    if (dom.q == 1.0) return project_l1(w, dom.radius);
    throw ConfigError("md_step: unsupported domain exponent q");
  }
  if (dom.q != 1.0)
    throw ConfigError("md_step: pnorm geometry requires the l1 ball");
  const Vec w = geom.grad_psi(theta_t) - alpha * g;
  Vec cand = geom.grad_psi_inverse(w);
  if (cand.lpNorm<1>() <= dom.radius) return cand;
  return detail::pnorm_l1_bregman_project(geom, w, alpha, dom.radius);
}

// First-order optimality residual of a candidate mirror step, in the dual
// norm: the KKT residual of grad phi = g + (grad psi(x) - grad psi(theta_t))
// / alpha against the active lq-ball constraint.
inline double md_step_residual(const ProxGeometry& geom, const Domain& dom,
                               const Vec& theta_t, const Vec& g, double alpha,
                               const Vec& x) {
  const Vec grad = g + (geom.grad_psi(x) - geom.grad_psi(theta_t)) / alpha;
  const double nx = lq_norm(x, dom.q);
  if (nx < dom.radius * (1.0 - 1e-9)) return geom.dual_norm(grad);
  if (dom.q == 2.0) {
    const Vec n_hat = x / x.norm();
    const double lam = std::max(0.0, -grad.dot(n_hat));
    return geom.dual_norm(grad + lam * n_hat);
  }
  // l1 ball: lam fits the active coordinates, inactive ones need |grad_j|
  // <= lam. Residual measured in l_inf.
  double lam_sum = 0.0;
  int active = 0;
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) {
      lam_sum += -grad[j] * (x[j] > 0 ? 1.0 : -1.0);
      ++active;
    }
  }
  const double lam = std::max(0.0, active > 0 ? lam_sum / active : 0.0);
  double res = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0)
      res = std::max(res, std::abs(grad[j] + lam * (x[j] > 0 ? 1.0 : -1.0)));
    else
      res = std::max(res, std::max(0.0, std::abs(grad[j]) - lam));
  }
  return res;
}

}  // namespace zo
