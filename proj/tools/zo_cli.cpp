// Command-line front end: single runs, grid sweeps, lemma diagnostics,
// rate fitting, lower-bound calculation, the sandwich experiment and plot
// script emission. See README.md for the config format and examples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zo/zo.hpp"

namespace {

int run_single(const std::string& config_path, const std::string& trace_path) {
  zo::SweepConfig cfg = zo::parse_config_file(config_path);
  const int d = cfg.d_grid.front();
  const long long T = cfg.T_grid.front();
  const int m = cfg.m_grid.front();
  const double alpha = cfg.effective_alpha_grid().front();
  const std::uint64_t seed = zo::mix64(cfg.master_seed, 0, 0);

  const zo::ProblemInstance problem =
      zo::build_problem(cfg.problem, cfg.domain, d, T, seed);
  const zo::ProxGeometry geom = zo::build_geometry(cfg.geometry, d);
  const zo::Domain dom{cfg.domain.q, cfg.domain.radius, d};
  const zo::EstimatorConfig est = zo::build_estimator(cfg.estimator, d, m);
  const zo::Schedule sched = zo::derive_schedule(
      problem, geom, dom, est, zo::schedule_family_from(cfg.schedule.family),
      alpha, cfg.schedule.u_mult);
  zo::RunOptions opts;
  opts.config_digest = cfg.digest();
  const zo::RunRecord rec =
      zo::run(problem, geom, dom, est, sched, T, seed, opts);

  std::cout << "problem=" << problem.name << " d=" << d << " T=" << T
            << " estimator=" << cfg.estimator.kind
            << " schedule=" << cfg.schedule.family << " seed=" << rec.seed
            << "\nfinal_gap=" << rec.final_gap
            << " evaluations_total=" << rec.evaluations_total
            << " wall_time_s=" << rec.wall_time << "\n";
  if (!trace_path.empty()) {
    std::ofstream f(trace_path, std::ios::trunc);
    if (!f) throw zo::DataError("cannot write trace file: " + trace_path);
    f << "t,gap\n";
    for (const auto& [t, gap] : rec.trace) f << t << ',' << gap << "\n";
    std::cout << "trace written to " << trace_path << "\n";
  }
  return 0;
}

int run_sweep_cmd(const std::string& config_path, std::string out_path) {
  zo::SweepConfig cfg = zo::parse_config_file(config_path);
  if (out_path.empty()) out_path = cfg.output_path;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<zo::SweepRow> rows = zo::run_sweep(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::ostringstream header;
  header << "generated_by=zo sweep elapsed_s=" << elapsed;
  if (out_path.empty()) {
    zo::write_csv(rows, std::cout, header.str());
  } else {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw zo::DataError("cannot write output file: " + out_path);
    zo::write_csv(rows, f, header.str());
    std::cerr << rows.size() << " rows -> " << out_path << " (" << elapsed
              << " s)\n";
  }
  return 0;
}

zo::Rng make_rng(std::uint64_t seed) { return zo::Rng(zo::mix64(seed, 0, 1)); }

int diagnose_moments(int d, long long N, std::uint64_t seed) {
  zo::Rng rng = make_rng(seed);
  std::printf("%-10s %3s %3s %14s %14s %10s %10s\n", "dist", "d", "k",
              "empirical", "theory", "stderr", "cov_dev");
  for (auto kind : {zo::SmoothingKind::gaussian, zo::SmoothingKind::ball,
                    zo::SmoothingKind::sphere, zo::SmoothingKind::hypercube}) {
    for (int k : {1, 2, 3, 4, 6}) {
      const zo::SmoothingDistribution dist{kind, d};
      const auto diag = zo::moment_diagnostics(dist, k, N, rng);
      std::printf("%-10s %3d %3d %14.6f %14.6f %10.2e %10.2e\n",
                  zo::to_string(kind).c_str(), d, k,
                  diag.empirical_kth_moment, zo::theory_moment(dist, k),
                  diag.kth_moment_stderr, diag.cov_deviation);
    }
  }
  std::printf("note: gaussian/ball s(d) constants are implementation-defined "
              "(d+4, d+2); see README\n");
  return 0;
}

int diagnose_dominance(int d, double u, long long N, std::uint64_t seed) {
  zo::Rng rng = make_rng(seed);
  std::printf("%-22s %3s %6s %18s %12s %s\n", "pair", "d", "u",
              "max_cdf_violation", "noise_band", "ok");
  const std::pair<zo::SmoothingKind, zo::SmoothingKind> pairs[] = {
      {zo::SmoothingKind::gaussian, zo::SmoothingKind::gaussian},
      {zo::SmoothingKind::ball, zo::SmoothingKind::ball},
      {zo::SmoothingKind::ball, zo::SmoothingKind::sphere}};
  bool all_ok = true;
  for (const auto& [k1, k2] : pairs) {
    const auto res = zo::dominance_check(k1, k2, u, d, N, rng);
    const bool ok = res.max_cdf_violation <= res.noise_band;
    all_ok = all_ok && ok;
    std::printf("(%-9s,%-9s) %3d %6.3f %18.6f %12.6f %s\n",
                zo::to_string(k1).c_str(), zo::to_string(k2).c_str(), d, u,
                res.max_cdf_violation, res.noise_band, ok ? "yes" : "NO");
  }
  return all_ok ? 0 : static_cast<int>(zo::ExitCode::numerical);
}

int diagnose_lipschitz(int k, long long N, std::uint64_t seed) {
  zo::Rng rng = make_rng(seed);
  const std::vector<double> u_grid{0.5, 0.1, 0.02};
  const std::vector<int> d_grid{4, 16, 64};
  const auto res = zo::lipschitz_diff_moment_check(k, u_grid, d_grid, N, rng);
  std::printf("%6s %4s %12s\n", "u", "d", "ratio");
  for (const auto& c : res.cells)
    std::printf("%6.3f %4d %12.6f\n", c.u, c.d, c.ratio);
  std::printf("max/min ratio across grid: %.3f\n",
              res.max_ratio / res.min_ratio);
  return 0;
}

int diagnose_bias(int d, double u, long long N, std::uint64_t seed) {
  zo::Rng rng = make_rng(seed);
  zo::Domain dom{2.0, 10.0, d};
  const zo::ProblemInstance problem =
      zo::make_smooth_quadratic(d, zo::Vec::Zero(d), dom, 0.0);
  zo::Vec theta = zo::Vec::Zero(d);
  theta[0] = 1.0;  // ||grad f(theta)|| = 1
  zo::EstimatorConfig est;
  est.kind = zo::EstimatorKind::two_point;
  est.dist = {zo::SmoothingKind::sphere, d};
  const auto res = zo::bias_probe(problem, est, theta, u, 0.0, N, rng);
  std::printf("two_point sphere d=%d u=%g N=%lld\n", d, u,
              static_cast<long long>(N));
  std::printf("bias_norm=%.6e (stderr %.2e)  lemma_bound=%.6e\n",
              res.bias_norm, res.bias_stderr, res.lemma_bound);
  std::printf("second_moment=%.6f (stderr %.2e)  bound=%.6f\n",
              res.second_moment, res.second_moment_stderr,
              res.second_moment_bound);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zo: zero-order stochastic convex optimization benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_path, trace_path, csv_path, x_field = "T";
  std::string bound_kind = "l2";
  int d = 8, k = 2;
  long long N = 100000, T = 10000;
  double u = 0.1, q = 2.0, R = 1.0, L = 1.0;
  int m = 1;
  std::uint64_t seed = 0;

  auto* c_run = app.add_subcommand("run", "execute a single run");
  c_run->add_option("--config", config_path, "config file")->required();
  c_run->add_option("--trace-out", trace_path, "write the (t, gap) trace CSV");

  auto* c_sweep = app.add_subcommand("sweep", "execute a config grid sweep");
  c_sweep->add_option("--config", config_path, "config file")->required();
  c_sweep->add_option("--out", out_path, "output CSV (default: config value)");

  auto* c_diag = app.add_subcommand("diagnose", "empirical lemma checks");
  c_diag->require_subcommand(1);
  auto* c_mom = c_diag->add_subcommand("moments", "perturbation moment oracles");
  c_mom->add_option("--d", d, "dimension");
  c_mom->add_option("--n", N, "sample count");
  c_mom->add_option("--seed", seed, "rng seed");
  auto* c_dom = c_diag->add_subcommand("dominance", "norm stochastic dominance");
  c_dom->add_option("--d", d, "dimension");
  c_dom->add_option("--u", u, "perturbation scale");
  c_dom->add_option("--n", N, "sample count");
  c_dom->add_option("--seed", seed, "rng seed");
  auto* c_lip = c_diag->add_subcommand("lipschitz", "difference moment bound");
  c_lip->add_option("--k", k, "moment order");
  c_lip->add_option("--n", N, "sample count");
  c_lip->add_option("--seed", seed, "rng seed");
  auto* c_bias = c_diag->add_subcommand("bias", "estimator bias/second moment");
  c_bias->add_option("--d", d, "dimension");
  c_bias->add_option("--u", u, "smoothing parameter");
  c_bias->add_option("--n", N, "sample count");
  c_bias->add_option("--seed", seed, "rng seed");

  auto* c_fit = app.add_subcommand("fit", "log-log rate fit over a sweep CSV");
  c_fit->add_option("--csv", csv_path, "sweep CSV")->required();
  c_fit->add_option("--x", x_field, "x field: T or d");

  auto* c_bound = app.add_subcommand("bound", "lower-bound calculator");
  c_bound->add_option("--kind", bound_kind, "l2 | l2-multi | linf");
  c_bound->add_option("--d", d, "dimension")->required();
  c_bound->add_option("--T", T, "horizon")->required();
  c_bound->add_option("--q", q, "domain exponent");
  c_bound->add_option("--R", R, "domain radius");
  c_bound->add_option("--L", L, "Lipschitz constant");
  c_bound->add_option("--m", m, "evaluations per iteration (l2-multi)");

  auto* c_sand = app.add_subcommand("sandwich", "hard-instance sandwich check");
  c_sand->add_option("--config", config_path, "config file")->required();

  auto* c_plots = app.add_subcommand("plots", "emit gnuplot scripts for a CSV");
  c_plots->add_option("--csv", csv_path, "sweep CSV")->required();
  c_plots->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*c_run) return run_single(config_path, trace_path);
    if (*c_sweep) return run_sweep_cmd(config_path, out_path);
    if (*c_mom) return diagnose_moments(d, N, seed);
    if (*c_dom) return diagnose_dominance(d, u, N, seed);
    if (*c_lip) return diagnose_lipschitz(k, N, seed);
    if (*c_bias) return diagnose_bias(d, u, N, seed);
    if (*c_fit) {
      const auto rows = zo::read_csv_file(csv_path);
      const zo::FitResult fr = zo::fit_rate(rows, x_field);
      std::printf("slope=%.6f intercept=%.6f stderr=%.6f n_points=%d\n",
                  fr.slope, fr.intercept, fr.stderr_, fr.n_points);
      return 0;
    }
    if (*c_bound) {
      zo::LowerBoundQuery qr;
      qr.bound = zo::bound_kind_from(bound_kind);
      qr.d = d;
      qr.T = T;
      qr.q = q;
      qr.R = R;
      qr.L = L;
      qr.m = m;
      if (qr.q == 1.0 && qr.bound != zo::BoundKind::linf)
        std::cerr << "warning: the l2 bounds are vacuous at q = 1\n";
      std::printf("%.10g\n", zo::lower_bound_value(qr));
      return 0;
    }
    if (*c_sand) {
      const zo::SweepConfig cfg = zo::parse_config_file(config_path);
      const zo::SandwichReport rep = zo::sandwich_report(cfg);
      std::printf(
          "d=%d T=%lld replications=%d\nlower=%.6e measured=%.6e upper=%.6e\n"
          "%s\n",
          rep.d, rep.T, rep.replications, rep.lower, rep.measured_mean_gap,
          rep.upper,
          !rep.applicable ? "not asserted (degenerate horizon)"
                          : (rep.ok ? "ok: inside the sandwich"
                                    : "FAIL: outside the sandwich"));
      return rep.ok ? 0 : static_cast<int>(zo::ExitCode::numerical);
    }
    if (*c_plots) {
      const auto files = zo::emit_plots(csv_path, out_path);
      for (const auto& f : files) std::cout << f << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(zo::exit_code_for(e));
  }
  return 0;
}
