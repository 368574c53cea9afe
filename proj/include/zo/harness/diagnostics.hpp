#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "zo/errors.hpp"
#include "zo/rng.hpp"
#include "zo/smoothing.hpp"

namespace zo {

struct DominanceResult {
  double max_cdf_violation = 0.0;  // sup_a CDF_{||Z1+uZ2||}(a) - CDF_{||Z1||}(a)
  double noise_band = 0.0;         // 2 sqrt(log N / N)
};

// Empirical check that ||Z1 + u Z2|| stochastically dominates ||Z1|| for
// the admissible smoothing pairs: the CDF difference should be <= 0 up to
// sampling noise. Uses coupled draws of Z1 for both norms.
inline DominanceResult dominance_check(SmoothingKind k1, SmoothingKind k2,
                                       double u, int d, long long N,
                                       Rng& rng) {
  if (!valid_double_smoothing_pair(k1, k2))
    throw ConfigError("dominance_check: invalid smoothing pair");
  if (N < 100000)
    throw ContractViolation("dominance_check: N must be >= 10^5");
  if (!(u >= 0.0)) throw ContractViolation("dominance_check: u must be >= 0");
  const SmoothingDistribution d1{k1, d}, d2{k2, d};
  std::vector<double> base(N), perturbed(N);
  double hi = 0.0;
  for (long long i = 0; i < N; ++i) {
    const Vec z1 = sample(d1, rng);
    const Vec z2 = sample(d2, rng);
    base[i] = z1.norm();
    perturbed[i] = (z1 + u * z2).norm();
    hi = std::max(hi, std::max(base[i], perturbed[i]));
  }
  std::sort(base.begin(), base.end());
  std::sort(perturbed.begin(), perturbed.end());

  const int grid = 512;
  double worst = -1.0;
  for (int gi = 1; gi <= grid; ++gi) {
    const double a = hi * gi / grid;
    const auto cdf = [&](const std::vector<double>& v) {
      return static_cast<double>(std::upper_bound(v.begin(), v.end(), a) -
                                 v.begin()) /
             static_cast<double>(N);
    };
    worst = std::max(worst, cdf(perturbed) - cdf(base));
  }
  DominanceResult res;
  res.max_cdf_violation = worst;
  res.noise_band =
      2.0 * std::sqrt(std::log(static_cast<double>(N)) / N);
  return res;
}

struct LipschitzCell {
  double u = 0.0;
  int d = 0;
  double ratio = 0.0;
};

struct LipschitzCheckResult {
  std::vector<LipschitzCell> cells;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};

// Moment bound for Lipschitz differences under the (ball, sphere) pair with
// the 1-Lipschitz convex test function h = ||.||_2: reports
//   E|h(Z1 + u Z2) - h(Z1)|^k / (u^k [u d^{k/2} + 1 + log^{k/2}(d + 2k)])
// per grid cell. The theory bounds the ratio by a constant independent of
// u and d; the unspecified constant means only boundedness is checkable.
inline LipschitzCheckResult lipschitz_diff_moment_check(
    int k, const std::vector<double>& u_grid, const std::vector<int>& d_grid,
    long long N, Rng& rng) {
  if (k < 1) throw ContractViolation("lipschitz check: k must be >= 1");
  LipschitzCheckResult out;
  for (int d : d_grid) {
    const SmoothingDistribution d1{SmoothingKind::ball, d};
    const SmoothingDistribution d2{SmoothingKind::sphere, d};
    for (double u : u_grid) {
      double sum = 0.0;
      for (long long i = 0; i < N; ++i) {
        const Vec z1 = sample(d1, rng);
        const Vec z2 = sample(d2, rng);
        sum += std::pow(std::abs((z1 + u * z2).norm() - z1.norm()), k);
      }
      const double numerator = sum / N;
      const double denom =
          std::pow(u, k) * (u * std::pow(double(d), 0.5 * k) + 1.0 +
                            std::pow(std::log(d + 2.0 * k), 0.5 * k));
      out.cells.push_back({u, d, u == 0.0 ? 0.0 : numerator / denom});
    }
  }
  out.max_ratio = 0.0;
  out.min_ratio = kInf;
  for (const auto& c : out.cells) {
    out.max_ratio = std::max(out.max_ratio, c.ratio);
    out.min_ratio = std::min(out.min_ratio, c.ratio);
  }
  return out;
}

}  // namespace zo
