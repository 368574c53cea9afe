// Acceptance suite: every criterion below is checked at its stated
// tolerance and prints one pass/fail line. Experiment parameters (noise
// scales, step multipliers) are fixed here; they were chosen once during
// calibration and must not be tuned per run.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "zo/zo.hpp"

using namespace zo;

namespace {

constexpr std::uint64_t kMasterSeed = 20260811;

void report(const char* id, const char* name, bool pass,
            const std::string& detail) {
  std::printf("[ACCEPT] %-3s %-28s %s  (%s)\n", id, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  EXPECT_TRUE(pass) << id << " " << name << ": " << detail;
}

SweepConfig quadratic_sweep_base() {
  SweepConfig cfg;
  cfg.problem.kind = "smooth_quadratic";
  cfg.problem.theta_star_frac = 0.5;
  cfg.geometry.kind = "euclidean";
  cfg.domain.q = 2.0;
  cfg.domain.radius = 1.0;
  cfg.estimator.kind = "two_point";
  cfg.estimator.dist = "sphere";
  cfg.schedule.family = "smooth";
  cfg.schedule.u_mult = 1.0;
  cfg.replications = 20;
  cfg.master_seed = kMasterSeed;
  return cfg;
}

double mean_gap(const std::vector<SweepRow>& rows) {
  double s = 0.0;
  for (const auto& r : rows) s += r.final_gap;
  return s / rows.size();
}

}  // namespace

// Smooth-case sqrt(T) rate: two-point + sphere smoothing on the noisy
// quadratic, d = 8; fitted log-log slope of mean gap vs T in [-0.65, -0.35].
TEST(Acceptance, C01_SqrtTRate) {
  SweepConfig cfg = quadratic_sweep_base();
  cfg.problem.sigma_noise = 2.0;
  cfg.schedule.alpha_mult = 0.125;
  cfg.d_grid = {8};
  cfg.T_grid = {100, 1000, 10000, 100000};
  const FitResult fit = fit_rate(run_sweep(cfg), "T");
  std::ostringstream d;
  d << "slope=" << fit.slope << " target [-0.65,-0.35]";
  report("C1", "sqrtT-rate", fit.slope >= -0.65 && fit.slope <= -0.35, d.str());
}

// sqrt(d) scaling at fixed T = 1e4 over d in {4, 16, 64}; noise scaled
// 1/sqrt(d) so the class Lipschitz constant is dimension-free.
TEST(Acceptance, C02_SqrtDScaling) {
  SweepConfig cfg = quadratic_sweep_base();
  cfg.problem.sigma_noise = 7.0;
  cfg.problem.sigma_noise_scale = "inv_sqrt_d";
  cfg.schedule.alpha_mult = 0.125;
  cfg.d_grid = {4, 16, 64};
  cfg.T_grid = {10000};
  const FitResult fit = fit_rate(run_sweep(cfg), "d");
  std::ostringstream d;
  d << "slope=" << fit.slope << " target [0.3,0.7]";
  report("C2", "sqrtD-scaling", fit.slope >= 0.3 && fit.slope <= 0.7, d.str());
}

// m-point averaging with m = d suppresses the dimension penalty: mean gap
// ratio between d = 64 and d = 8 at T = 1e4 is at most 2.
TEST(Acceptance, C03_MPointFlattening) {
  SweepConfig cfg = quadratic_sweep_base();
  cfg.problem.sigma_noise = 7.0;
  cfg.problem.sigma_noise_scale = "inv_sqrt_d";
  cfg.estimator.kind = "two_point_avg";
  cfg.schedule.alpha_mult = 0.125;
  cfg.T_grid = {10000};
  cfg.d_grid = {8};
  cfg.m_grid = {8};
  const double gap8 = mean_gap(run_sweep(cfg));
  cfg.d_grid = {64};
  cfg.m_grid = {64};
  const double gap64 = mean_gap(run_sweep(cfg));
  const double ratio = gap64 / gap8;
  std::ostringstream d;
  d << "gap(d=64,m=64)/gap(d=8,m=8)=" << ratio << " target <= 2.0";
  report("C3", "m-point flattening", ratio <= 2.0, d.str());
}

// Non-smooth rate: double-smoothed (ball, sphere) on L||theta - theta*||_2
// with the optimum on the boundary. Slope vs T in [-0.65, -0.35] at d = 8;
// slope vs d in [0.3, 0.8] over {4, 16, 64} at fixed T = 1000.
TEST(Acceptance, C04_NonSmoothRate) {
  SweepConfig cfg;
  cfg.problem.kind = "nonsmooth_norm";
  cfg.problem.L = 1.0;
  cfg.problem.sigma_noise = 1.0;
  cfg.problem.sigma_noise_scale = "inv_sqrt_d";
  cfg.problem.theta_star_frac = 1.0;
  cfg.geometry.kind = "euclidean";
  cfg.domain.q = 2.0;
  cfg.domain.radius = 1.0;
  cfg.estimator.kind = "double_smoothed";
  cfg.estimator.dist1 = "ball";
  cfg.estimator.dist2 = "sphere";
  cfg.schedule.family = "nonsmooth";
  cfg.schedule.alpha_mult = 2.5;
  cfg.schedule.u_mult = 1.0;
  cfg.replications = 20;
  cfg.master_seed = kMasterSeed;
  cfg.d_grid = {8};
  cfg.T_grid = {100, 1000, 10000, 100000};
  const FitResult fit_T = fit_rate(run_sweep(cfg), "T");
  cfg.d_grid = {4, 16, 64};
  cfg.T_grid = {1000};
  const FitResult fit_d = fit_rate(run_sweep(cfg), "d");
  std::ostringstream d;
  d << "T-slope=" << fit_T.slope << " in [-0.65,-0.35], d-slope="
    << fit_d.slope << " in [0.3,0.8]";
  report("C4", "nonsmooth rate",
         fit_T.slope >= -0.65 && fit_T.slope <= -0.35 && fit_d.slope >= 0.3 &&
             fit_d.slope <= 0.8,
         d.str());
}

// Estimator bias: on the noiseless quadratic with sphere smoothing at
// d = 4, measured bias stays under u * d^{3/2} / 2 plus Monte-Carlo error
// for u in {1e-1, 1e-2, 1e-3}; points above the noise floor (if any) must
// scale linearly in u.
TEST(Acceptance, C05_BiasLemma) {
  Rng rng(mix64(kMasterSeed, 5));
  const int d = 4;
  const Domain dom{2.0, 10.0, d};
  const auto problem = make_smooth_quadratic(d, Vec::Zero(d), dom, 0.0);
  EstimatorConfig est;
  est.kind = EstimatorKind::two_point;
  est.dist = {SmoothingKind::sphere, d};
  Vec theta = Vec::Zero(d);
  theta[0] = 1.0;
  bool bound_ok = true;
  std::vector<std::pair<double, double>> above_floor;
  std::ostringstream detail;
  for (double u : {1e-1, 1e-2, 1e-3}) {
    const auto res = bias_probe(problem, est, theta, u, 0.0, 1000000, rng);
    const double bound = u * 0.5 * std::pow(double(d), 1.5);
    bound_ok = bound_ok && res.bias_norm <= bound + 4.0 * res.bias_stderr;
    if (res.bias_norm > 5.0 * res.bias_stderr)
      above_floor.emplace_back(u, res.bias_norm);
    detail << "u=" << u << ":bias=" << res.bias_norm << "<=" << bound << "+4se ";
  }
  bool slope_ok = true;
  if (above_floor.size() >= 2) {
    const double slope = fit_loglog(above_floor).slope;
    slope_ok = slope >= 0.9 && slope <= 1.1;
    detail << "slope=" << slope;
  } else {
    // exactly unbiased on quadratics (symmetric smoothing): all u at floor
    detail << "all points at MC noise floor; linear-scaling clause vacuous";
  }
  report("C5", "bias lemma", bound_ok && slope_ok, detail.str());
}

// Second moment: same setting with ||grad f(theta)|| = 1; empirical
// E||g||^2 <= 2d + u^2 d^3 / 2 + 4 stderr on the whole u grid.
TEST(Acceptance, C06_SecondMomentLemma) {
  Rng rng(mix64(kMasterSeed, 6));
  const int d = 4;
  const Domain dom{2.0, 10.0, d};
  const auto problem = make_smooth_quadratic(d, Vec::Zero(d), dom, 0.0);
  EstimatorConfig est;
  est.kind = EstimatorKind::two_point;
  est.dist = {SmoothingKind::sphere, d};
  Vec theta = Vec::Zero(d);
  theta[0] = 1.0;
  bool ok = true;
  std::ostringstream detail;
  for (double u : {1e-1, 1e-2, 1e-3}) {
    const auto res = bias_probe(problem, est, theta, u, 0.0, 1000000, rng);
    const double bound = 2.0 * d + 0.5 * u * u * d * d * d;
    ok = ok && res.second_moment <= bound + 4.0 * res.second_moment_stderr;
    detail << "u=" << u << ":" << res.second_moment << "<=" << bound << " ";
  }
  report("C6", "second-moment lemma", ok, detail.str());
}

// Moment oracles: empirical E||Z||^k within 4 MC standard errors of the
// closed form at N = 1e6 for every distribution, k in {1,2,3,4,6} and
// d in {2,8,32}; and the lemma constants c_3 <= sqrt(3), c_4 <= 3.
TEST(Acceptance, C07_MomentOracles) {
  Rng rng(mix64(kMasterSeed, 7));
  const int ks[] = {1, 2, 3, 4, 6};
  bool ok = true;
  std::ostringstream detail;
  for (auto kind : {SmoothingKind::gaussian, SmoothingKind::ball,
                    SmoothingKind::sphere, SmoothingKind::hypercube}) {
    for (int d : {2, 8, 32}) {
      const SmoothingDistribution dist{kind, d};
      const long long N = 1000000;
      // compensated sums: the sphere/hypercube moments are constants and
      // the check degenerates to floating-point exactness
      double sum[5] = {0, 0, 0, 0, 0}, comp[5] = {0, 0, 0, 0, 0};
      double sumsq[5] = {0, 0, 0, 0, 0};
      for (long long i = 0; i < N; ++i) {
        const double n = sample(dist, rng).norm();
        for (int j = 0; j < 5; ++j) {
          const double v = std::pow(n, ks[j]);
          const double y = v - comp[j];
          const double t = sum[j] + y;
          comp[j] = (t - sum[j]) - y;
          sum[j] = t;
          sumsq[j] += v * v;
        }
      }
      for (int j = 0; j < 5; ++j) {
        const double mean = sum[j] / N;
        const double se =
            std::sqrt(std::max(0.0, sumsq[j] / N - mean * mean) / N);
        const double want = theory_moment(dist, ks[j]);
        const double tol = std::max(4.0 * se, 1e-11 * want);
        if (std::abs(mean - want) > tol) {
          ok = false;
          detail << to_string(kind) << " d=" << d << " k=" << ks[j]
                 << " emp=" << mean << " vs " << want << "; ";
        }
      }
      if (theory_moment(dist, 4) > 3.0 * d * d + 1e-9 ||
          theory_moment(dist, 3) > std::sqrt(3.0) * std::pow(d, 1.5) + 1e-9) {
        ok = false;
        detail << to_string(kind) << " d=" << d << " c_k bound violated; ";
      }
    }
  }
  if (ok) detail << "all 60 moment checks within 4 stderr, c_k bounds hold";
  report("C7", "moment oracles", ok, detail.str());
}

// Stochastic dominance of ||Z1 + u Z2|| over ||Z1||: empirical CDF
// violation within the sampling noise band 2 sqrt(log N / N) for all three
// admissible pairs, d in {2,8,32}, u in {0.1,0.5}.
TEST(Acceptance, C08_StochasticDominance) {
  Rng rng(mix64(kMasterSeed, 8));
  const long long N = 1000000;
  const double band = 2.0 * std::sqrt(std::log(double(N)) / N);
  const std::pair<SmoothingKind, SmoothingKind> pairs[] = {
      {SmoothingKind::gaussian, SmoothingKind::gaussian},
      {SmoothingKind::ball, SmoothingKind::ball},
      {SmoothingKind::ball, SmoothingKind::sphere}};
  bool ok = true;
  double worst = -kInf;
  for (const auto& [k1, k2] : pairs)
    for (int d : {2, 8, 32})
      for (double u : {0.1, 0.5}) {
        const auto res = dominance_check(k1, k2, u, d, N, rng);
        worst = std::max(worst, res.max_cdf_violation);
        ok = ok && res.max_cdf_violation <= band;
      }
  std::ostringstream detail;
  detail << "worst violation=" << worst << " band=" << band;
  report("C8", "stochastic dominance", ok, detail.str());
}

// Hard-instance sandwich: measured mean gap over 20 random-v replications
// lies between 0.8x the minimax lower bound and the smooth-theorem upper
// bound at canonical multipliers.
TEST(Acceptance, C09_Sandwich) {
  SweepConfig cfg;
  cfg.problem.kind = "gaussian_linear";
  cfg.problem.L = 1.0;
  cfg.problem.q = 2.0;
  cfg.problem.v_mode = "per_replication";
  cfg.geometry.kind = "euclidean";
  cfg.domain.q = 2.0;
  cfg.domain.radius = 1.0;
  cfg.estimator.kind = "two_point";
  cfg.estimator.dist = "sphere";
  cfg.schedule.family = "smooth";
  cfg.schedule.alpha_mult = 1.0;
  cfg.schedule.u_mult = 1.0;
  cfg.d_grid = {8};
  cfg.T_grid = {10000};
  cfg.replications = 20;
  cfg.master_seed = kMasterSeed;
  const SandwichReport rep = sandwich_report(cfg);
  std::ostringstream detail;
  detail << "0.8*lower=" << 0.8 * rep.lower << " <= measured="
         << rep.measured_mean_gap << " <= upper=" << rep.upper;
  report("C9", "hard-instance sandwich", rep.ok && rep.applicable,
         detail.str());
}

// Closed-form optimality-gap lemma on the full grid.
TEST(Acceptance, C10_OnevecGap) {
  bool ok = true;
  for (int d = 2; d <= 64; ++d)
    for (double q : {1.0, 1.5, 2.0, 4.0})
      for (int i = 1; i <= d; ++i) ok = ok && onevec_gap(d, q, i).holds;
  report("C10", "onevec optimality gap", ok,
         "grid d=2..64, q in {1,1.5,2,4}, i=1..d");
}

// Sweep determinism: identical config and master seed give a byte-identical
// CSV body, serial and with ZO_WORKERS = 8.
TEST(Acceptance, C11_Determinism) {
  SweepConfig cfg = quadratic_sweep_base();
  cfg.problem.sigma_noise = 0.5;
  cfg.schedule.alpha_mult = 0.5;
  cfg.d_grid = {4, 8};
  cfg.T_grid = {200, 400};
  cfg.replications = 3;
  const auto csv_text = [](const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    write_csv(rows, os);
    return os.str();
  };
  const std::string serial = csv_text(run_sweep(cfg, 1));
  const std::string rerun = csv_text(run_sweep(cfg, 1));
  setenv("ZO_WORKERS", "8", 1);
  const std::string parallel = csv_text(run_sweep(cfg));
  unsetenv("ZO_WORKERS");
  const bool ok = serial == rerun && serial == parallel;
  report("C11", "sweep determinism", ok,
         ok ? "serial rerun and 8-worker CSV bodies identical"
            : "CSV bodies differ");
}

// Full-information baseline: at d = 16 on the noisy quadratic, the
// subgradient-oracle gap at T = 1e4 is at least 2x smaller than the
// two-point gap, and both decay with slope about -1/2 in T. 60
// replications: per-run gaps are heavy-tailed and the ratio needs a
// stable mean.
TEST(Acceptance, C12_FullInfoBaseline) {
  SweepConfig tp = quadratic_sweep_base();
  tp.problem.sigma_noise = 2.0;
  tp.schedule.alpha_mult = 0.3;
  tp.replications = 60;
  tp.d_grid = {16};
  tp.T_grid = {100, 1000, 10000, 100000};
  const auto tp_rows = run_sweep(tp);

  SweepConfig fi = tp;
  fi.estimator.kind = "full_info";
  fi.schedule.family = "full_info";
  fi.schedule.alpha_mult = 0.006;
  const auto fi_rows = run_sweep(fi);

  const auto gap_at = [](const std::vector<SweepRow>& rows, long long T) {
    double s = 0.0;
    int n = 0;
    for (const auto& r : rows)
      if (r.T == T) {
        s += r.final_gap;
        ++n;
      }
    return s / n;
  };
  const double tp_gap = gap_at(tp_rows, 10000);
  const double fi_gap = gap_at(fi_rows, 10000);
  const double tp_slope = fit_rate(tp_rows, "T").slope;
  const double fi_slope = fit_rate(fi_rows, "T").slope;
  const bool ok = fi_gap * 2.0 <= tp_gap && tp_slope >= -0.65 &&
                  tp_slope <= -0.35 && fi_slope >= -0.65 && fi_slope <= -0.35;
  std::ostringstream detail;
  detail << "two_point gap=" << tp_gap << " full_info gap=" << fi_gap
         << " ratio=" << tp_gap / fi_gap << " slopes=" << tp_slope << "/"
         << fi_slope;
  report("C12", "full-info baseline", ok, detail.str());
}
