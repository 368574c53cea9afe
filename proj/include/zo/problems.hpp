#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "zo/errors.hpp"
#include "zo/geometry.hpp"
#include "zo/rng.hpp"
#include "zo/vec.hpp"

namespace zo {

// Which geometry the Lipschitz metadata refers to: l2 means gradients are
// measured in l2, l1 means gradients are measured in l_inf.
enum class NormTag { l2, l1 };

struct Optimum {
  Vec theta_star;
  double f_star = 0.0;
};

// A stochastic objective f(theta) = E[F(theta; X)]. The observation X is
// encoded as a vector (scalar observations use size 1). Instances are
// immutable after construction; eval/subgrad/sample are pure given the rng
// state.
struct ProblemInstance {
  std::string name;
  int dim = 1;
  std::function<Vec(Rng&)> sample;
  std::function<double(const Vec&, const Vec&)> eval;
  std::function<Vec(const Vec&, const Vec&)> subgrad;  // optional
  std::function<double(const Vec&)> f_exact;
  std::function<Vec(const Vec&)> grad_exact;  // optional, smooth problems
  Optimum optimum;
  double L = 1.0;    // E ||dF(theta;X)||_*^2 <= L^2
  double L1 = kNaN;  // gradient-Lipschitz constant; NaN when non-smooth
  NormTag norm_tag = NormTag::l2;
  bool canonical = true;  // false when hard-instance parameters overridden
};

// Parameters of the Gaussian linear hard instance: sigma^2 = 8 L^2 / (9d),
// delta^2 = (L^2/9) min{1/T, 1/d}, so that E||X||_2^2 = (delta^2+sigma^2) d
// <= L^2.
struct HardInstanceParams {
  int d = 1;
  double L = 1.0;
  long long T = 1;
  double q = 2.0;
  Vec v;
  double sigma2 = 0.0;
  double delta = 0.0;
};

inline HardInstanceParams hard_instance_params(int d, double L, long long T,
                                               double q, Vec v) {
  HardInstanceParams hp;
  hp.d = d;
  hp.L = L;
  hp.T = T;
  hp.q = q;
  hp.v = std::move(v);
  hp.sigma2 = 8.0 * L * L / (9.0 * d);
  hp.delta = (L / 3.0) * std::sqrt(std::min(1.0 / T, 1.0 / d));
  return hp;
}

inline Vec rademacher_vector(int d, std::uint64_t seed) {
  Rng rng(mix64(seed, 0x7ade));
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.rademacher();
  return v;
}

// F(theta; x) = <theta, x> with X ~ N(delta v, sigma^2 I), the lower-bound
// construction. The feasible minimizer over the lq ball of the given radius
// is theta* = -R d^{-1/q} v with value -delta R d^{1-1/q}. Optional
// overrides of (sigma^2, delta) mark the instance non-canonical.
inline ProblemInstance make_gaussian_linear(int d, double L, long long T,
                                            double q, double radius,
                                            const Vec& v,
                                            double sigma2_override = kNaN,
                                            double delta_override = kNaN) {
  if (d < 1 || !(L > 0.0) || T < 1 || !(q >= 1.0) || !(radius > 0.0))
    throw ConfigError("make_gaussian_linear: invalid parameters");
  if (v.size() != d) throw ConfigError("make_gaussian_linear: bad v");
  HardInstanceParams hp = hard_instance_params(d, L, T, q, v);
  bool canonical = true;
  if (!std::isnan(sigma2_override)) {
    hp.sigma2 = sigma2_override;
    canonical = false;
  }
  if (!std::isnan(delta_override)) {
    hp.delta = delta_override;
    canonical = false;
  }
  const double sigma = std::sqrt(hp.sigma2);
  const double delta = hp.delta;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const Vec vc = hp.v;

  ProblemInstance pi;
  pi.name = canonical ? "gaussian_linear" : "gaussian_linear_noncanonical";
  pi.dim = d;
  pi.sample = [d, delta, sigma, vc](Rng& rng) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = delta * vc[i] + sigma * rng.normal();
    return x;
  };
  pi.eval = [](const Vec& theta, const Vec& x) { return theta.dot(x); };
  pi.subgrad = [](const Vec&, const Vec& x) { return x; };
  pi.f_exact = [delta, vc](const Vec& theta) { return delta * vc.dot(theta); };
  pi.grad_exact = [delta, vc](const Vec&) { return Vec(delta * vc); };
  pi.optimum.theta_star = -radius * std::pow(double(d), -inv_q) * vc;
  pi.optimum.f_star = -delta * radius * std::pow(double(d), 1.0 - inv_q);
  pi.L = L;
  pi.L1 = 0.0;
  pi.norm_tag = NormTag::l2;
  pi.canonical = canonical;
  return pi;
}

inline ProblemInstance make_gaussian_linear(int d, double L, long long T,
                                            double q, double radius,
                                            std::uint64_t seed_v,
                                            double sigma2_override = kNaN,
                                            double delta_override = kNaN) {
  return make_gaussian_linear(d, L, T, q, radius, rademacher_vector(d, seed_v),
                              sigma2_override, delta_override);
}

// F(theta; (v, W)) = L_d ||theta - delta v||_1 + W with W ~ N(0, sigma^2)
// and L_d = L d^{-1/p}; the single-evaluation lower-bound class member.
// delta = min{R d^{-1/q}, sigma / (2 L_d sqrt(T))}.
inline ProblemInstance make_l1_median(int d, double L, double p, long long T,
                                      double sigma, double q, double radius,
                                      const Vec& v) {
  if (d < 1 || !(L > 0.0) || !(p >= 1.0) || T < 1 || !(sigma >= 0.0))
    throw ConfigError("make_l1_median: invalid parameters");
  if (v.size() != d) throw ConfigError("make_l1_median: bad v");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double L_d = L * std::pow(double(d), -inv_p);
  const double delta = std::min(radius * std::pow(double(d), -inv_q),
                                sigma / (2.0 * L_d * std::sqrt(double(T))));
  const Vec target = delta * v;

  ProblemInstance pi;
  pi.name = "l1_median";
  pi.dim = d;
  pi.sample = [sigma](Rng& rng) {
    Vec x(1);
    x[0] = sigma * rng.normal();
    return x;
  };
  pi.eval = [L_d, target](const Vec& theta, const Vec& x) {
    return L_d * (theta - target).lpNorm<1>() + x[0];
  };
  pi.subgrad = [L_d, target](const Vec& theta, const Vec&) {
    Vec g(theta.size());
    for (int i = 0; i < theta.size(); ++i) {
      const double w = theta[i] - target[i];
      g[i] = w > 0 ? L_d : (w < 0 ? -L_d : 0.0);
    }
    return g;
  };
  pi.f_exact = [L_d, target](const Vec& theta) {
    return L_d * (theta - target).lpNorm<1>();
  };
  pi.optimum.theta_star = target;
  pi.optimum.f_star = 0.0;
  pi.L = L;
  pi.L1 = kNaN;
  pi.norm_tag = p == 2.0 ? NormTag::l2 : NormTag::l1;
  return pi;
}

inline ProblemInstance make_l1_median(int d, double L, double p, long long T,
                                      double sigma, double q, double radius,
                                      std::uint64_t seed_v) {
  return make_l1_median(d, L, p, T, sigma, q, radius,
                        rademacher_vector(d, seed_v));
}

// F(theta; X) = 0.5 ||theta - theta* + sigma X||^2 - 0.5 sigma^2 d with
// X ~ N(0, I), so f(theta) = 0.5 ||theta - theta*||^2 exactly and the
// per-sample gradient Lipschitz constant is 1.
inline ProblemInstance make_smooth_quadratic(int d, const Vec& theta_star,
                                             const Domain& dom,
                                             double sigma_noise = 0.0) {
  if (theta_star.size() != d || dom.dim != d)
    throw ConfigError("make_smooth_quadratic: dimension mismatch");
  if (!dom.contains(theta_star))
    throw ConfigError("make_smooth_quadratic: theta_star infeasible");
  if (!(sigma_noise >= 0.0))
    throw ConfigError("make_smooth_quadratic: sigma_noise must be >= 0");
  const Vec ts = theta_star;
  const double s = sigma_noise;

  ProblemInstance pi;
  pi.name = "smooth_quadratic";
  pi.dim = d;
  pi.sample = [d, s](Rng& rng) {
    Vec x = Vec::Zero(d);
    if (s > 0.0)
      for (int i = 0; i < d; ++i) x[i] = rng.normal();
    return x;
  };
  pi.eval = [ts, s, d](const Vec& theta, const Vec& x) {
    return 0.5 * (theta - ts + s * x).squaredNorm() - 0.5 * s * s * d;
  };
  pi.subgrad = [ts, s](const Vec& theta, const Vec& x) {
    return Vec(theta - ts + s * x);
  };
  pi.f_exact = [ts](const Vec& theta) {
    return 0.5 * (theta - ts).squaredNorm();
  };
  pi.grad_exact = [ts](const Vec& theta) { return Vec(theta - ts); };
  pi.optimum.theta_star = ts;
  pi.optimum.f_star = 0.0;
  pi.L = dom.radius + ts.norm() + s * std::sqrt(double(d));
  pi.L1 = 1.0;
  pi.norm_tag = NormTag::l2;
  return pi;
}

// F(theta; X) = L ||theta - theta*||_2 + sigma <theta, X> with X ~ N(0, I);
// the canonical non-smooth objective f(theta) = L ||theta - theta*||_2.
inline ProblemInstance make_nonsmooth_norm(int d, const Vec& theta_star,
                                           double L, const Domain& dom,
                                           double sigma_noise = 0.0) {
  if (theta_star.size() != d || dom.dim != d)
    throw ConfigError("make_nonsmooth_norm: dimension mismatch");
  if (!dom.contains(theta_star))
    throw ConfigError("make_nonsmooth_norm: theta_star infeasible");
  const Vec ts = theta_star;
  const double s = sigma_noise;

  ProblemInstance pi;
  pi.name = "nonsmooth_norm";
  pi.dim = d;
  pi.sample = [d, s](Rng& rng) {
    Vec x = Vec::Zero(d);
    if (s > 0.0)
      for (int i = 0; i < d; ++i) x[i] = rng.normal();
    return x;
  };
  pi.eval = [ts, L, s](const Vec& theta, const Vec& x) {
    return L * (theta - ts).norm() + s * theta.dot(x);
  };
  pi.subgrad = [ts, L, s](const Vec& theta, const Vec& x) {
    const Vec w = theta - ts;
    const double n = w.norm();
    Vec g = n > 0.0 ? Vec(L / n * w) : Vec(Vec::Zero(theta.size()));
    if (s > 0.0) g += s * x;
    return g;
  };
  pi.f_exact = [ts, L](const Vec& theta) { return L * (theta - ts).norm(); };
  pi.optimum.theta_star = ts;
  pi.optimum.f_star = 0.0;
  pi.L = L + s * std::sqrt(double(d));
  pi.L1 = kNaN;
  pi.norm_tag = NormTag::l2;
  return pi;
}

// Closed forms for the two linear programs over the lq ball (minimize
// <1, theta>, problem B additionally forcing the first i coordinates
// nonnegative) and the separation the optimality-gap argument needs.
struct OnevecGap {
  double valA = 0.0;
  double valB = 0.0;
  double required_gap = 0.0;
  bool holds = false;
};

inline OnevecGap onevec_gap(int d, double q, int i) {
  if (i < 1 || i > d) throw ContractViolation("onevec_gap: need 1 <= i <= d");
  if (!(q >= 1.0)) throw ContractViolation("onevec_gap: need q >= 1");
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  OnevecGap r;
  r.valA = -std::pow(double(d), 1.0 - inv_q);
  r.valB = -std::pow(double(d - i), 1.0 - inv_q);
  r.required_gap = (1.0 - inv_q) * i / std::pow(double(d), inv_q);
  r.holds = r.valA <= r.valB - r.required_gap;
  return r;
}

}  // namespace zo
