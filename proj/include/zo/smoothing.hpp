#pragma once

#include <cmath>
#include <string>

#include "zo/errors.hpp"
#include "zo/geometry.hpp"
#include "zo/rng.hpp"
#include "zo/vec.hpp"

namespace zo {

// The four perturbation laws, all with E[Z Z^T] = I:
//   gaussian      N(0, I)
//   ball          uniform on the l2 ball of radius sqrt(d+2)
//   sphere        uniform on the l2 sphere of radius sqrt(d)
//   hypercube     uniform on {-1, +1}^d
enum class SmoothingKind { gaussian, ball, sphere, hypercube };

inline std::string to_string(SmoothingKind k) {
  switch (k) {
    case SmoothingKind::gaussian: return "gaussian";
    case SmoothingKind::ball: return "ball";
    case SmoothingKind::sphere: return "sphere";
    case SmoothingKind::hypercube: return "hypercube";
  }
  return "?";
}

struct SmoothingDistribution {
  SmoothingKind kind = SmoothingKind::sphere;
  int dim = 1;
};

inline Vec sample(const SmoothingDistribution& dist, Rng& rng) {
  const int d = dist.dim;
  Vec z(d);
  switch (dist.kind) {
    case SmoothingKind::gaussian:
      for (int i = 0; i < d; ++i) z[i] = rng.normal();
      return z;
    case SmoothingKind::sphere:
    case SmoothingKind::ball: {
      double n2 = 0.0;
      do {
        for (int i = 0; i < d; ++i) z[i] = rng.normal();
        n2 = z.squaredNorm();
      } while (n2 == 0.0);
      if (dist.kind == SmoothingKind::sphere) {
        z *= std::sqrt(static_cast<double>(d) / n2);
      } else {
        // direction * radius * U^{1/d}, rejection-free
        const double r = std::sqrt((d + 2.0) / n2) *
                         std::pow(rng.uniform_open(), 1.0 / d);
        z *= r;
      }
      return z;
    }
    case SmoothingKind::hypercube:
      for (int i = 0; i < d; ++i) z[i] = rng.rademacher();
      return z;
  }
  throw ConfigError("sample: unknown smoothing kind");
}

// Closed-form E ||Z||_2^k.
inline double theory_moment(const SmoothingDistribution& dist, int k) {
  if (k < 1) throw ContractViolation("theory_moment: k must be >= 1");
  const double d = dist.dim;
  switch (dist.kind) {
    case SmoothingKind::gaussian:
      return std::exp(0.5 * k * std::log(2.0) +
                      std::lgamma(0.5 * (k + d)) - std::lgamma(0.5 * d));
    case SmoothingKind::ball:
      return std::pow(d + 2.0, 0.5 * k) * d / (d + k);
    case SmoothingKind::sphere:
    case SmoothingKind::hypercube:
      return std::pow(d, 0.5 * k);
  }
  throw ConfigError("theory_moment: unknown smoothing kind");
}

// Constants of the smoothing assumption: s(d) with
// E ||<g,Z> Z||_*^2 <= s(d) ||g||_*^2, and M = sqrt(E[||Z||^4 ||Z||_*^2]).
// Sphere and hypercube values are exact; for gaussian and ball, s(d) is
// implementation-defined (the analysis only gives s(d) of order d): we use
// d+4 and d+2, which dominate E||Z||^4/d, the exact constant for
// rotationally invariant laws.
struct GeometryConstants {
  double s_d = 1.0;
  double M = 1.0;
};

inline GeometryConstants geometry_constants(const SmoothingDistribution& dist,
                                            const ProxGeometry& geom) {
  const double d = dist.dim;
  if (geom.kind == GeomKind::euclidean) {
    switch (dist.kind) {
      case SmoothingKind::sphere:
        return {d, std::pow(d, 1.5)};
      case SmoothingKind::gaussian:
        return {d + 4.0, std::sqrt(theory_moment(dist, 6))};
      case SmoothingKind::ball:
        return {d + 2.0, std::sqrt(theory_moment(dist, 6))};
      default:
        break;
    }
    throw ConfigError(
        "geometry_constants: hypercube smoothing pairs with the l1 "
        "geometry, not Euclidean");
  }
  if (dist.kind == SmoothingKind::hypercube) return {d, d * d};
  throw ConfigError(
      "geometry_constants: the l1 geometry pairs with hypercube smoothing");
}

// E[||Z||^2 ||Z||_*] in the geometry's norms; the constant in the
// smoothing-bias bound. Exact: E||Z||_2^3 for Euclidean, d^2 for the
// hypercube (||Z||_1 = d, ||Z||_inf = 1 surely).
inline double sqnorm_dualnorm_moment(const SmoothingDistribution& dist,
                                     const ProxGeometry& geom) {
  if (geom.kind == GeomKind::euclidean) return theory_moment(dist, 3);
  if (dist.kind != SmoothingKind::hypercube)
    throw ConfigError("sqnorm_dualnorm_moment: unsupported pairing");
  return static_cast<double>(dist.dim) * dist.dim;
}

struct MomentDiagnostics {
  double empirical_kth_moment = 0.0;
  double kth_moment_stderr = 0.0;
  double cov_deviation = 0.0;  // max-entry |E[Z Z^T] - I|
};

inline MomentDiagnostics moment_diagnostics(const SmoothingDistribution& dist,
                                            int k, long long N, Rng& rng) {
  if (N < 1000) throw ContractViolation("moment_diagnostics: N must be >= 1000");
  const int d = dist.dim;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  double sum = 0.0, sumsq = 0.0;
  for (long long i = 0; i < N; ++i) {
    const Vec z = sample(dist, rng);
    const double mk = std::pow(z.norm(), k);
    sum += mk;
    sumsq += mk * mk;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(z, 1.0);
  }
  MomentDiagnostics out;
  out.empirical_kth_moment = sum / N;
  const double var =
      std::max(0.0, sumsq / N - out.empirical_kth_moment *
                                    out.empirical_kth_moment);
  out.kth_moment_stderr = std::sqrt(var / N);
  cov /= static_cast<double>(N);
  double dev = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j)
      dev = std::max(dev, std::abs(cov(i, j) - (i == j ? 1.0 : 0.0)));
  out.cov_deviation = dev;
  return out;
}

// (dist1, dist2) pairs admitted for the double-smoothed estimator.
inline bool valid_double_smoothing_pair(SmoothingKind k1, SmoothingKind k2) {
  return (k1 == SmoothingKind::gaussian && k2 == SmoothingKind::gaussian) ||
         (k1 == SmoothingKind::ball && k2 == SmoothingKind::ball) ||
         (k1 == SmoothingKind::ball && k2 == SmoothingKind::sphere);
}

}  // namespace zo
