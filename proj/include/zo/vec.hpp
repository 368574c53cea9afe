#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace zo {

using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// lq norm for q >= 1, including q = inf.
inline double lq_norm(const Vec& v, double q) {
  if (std::isinf(q)) return v.lpNorm<Eigen::Infinity>();
  if (q == 2.0) return v.norm();
  if (q == 1.0) return v.lpNorm<1>();
  const double m = v.lpNorm<Eigen::Infinity>();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, q);
  return m * std::pow(s, 1.0 / q);
}

inline bool is_finite(const Vec& v) { return v.allFinite(); }

}  // namespace zo
