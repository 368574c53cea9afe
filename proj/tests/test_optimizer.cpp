#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_util.hpp"
#include "zo/harness/sweep.hpp"
#include "zo/optimizer.hpp"

using namespace zo;
using testutil::make_vec;

namespace {

Schedule smooth_schedule(double a, double u, ScheduleConstants c) {
  Schedule s;
  s.family = ScheduleFamily::smooth;
  s.alpha_mult = a;
  s.u_mult = u;
  s.constants = c;
  return s;
}

std::string record_fingerprint(const RunRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.seed << '|' << r.final_gap << '|' << r.evaluations_total << '|';
  for (const auto& [t, gap] : r.trace) os << t << ':' << gap << ';';
  for (int i = 0; i < r.final_avg_iterate.size(); ++i)
    os << r.final_avg_iterate[i] << ',';
  return os.str();
}

}  // namespace

TEST(ScheduleAt, SmoothFormulas) {
  ScheduleConstants c;
  c.R = 1.0;
  c.L = 1.0;
  c.L1 = 1.0;
  c.s_d = 4.0;
  c.M = 8.0;
  c.d = 4;
  const Schedule s = smooth_schedule(1.0, 1.0, c);
  EXPECT_NEAR(schedule_at(s, 1).alpha, 0.25, 1e-15);
  EXPECT_NEAR(schedule_at(s, 2).u1, 0.125, 1e-15);
}

TEST(ScheduleAt, NonSmoothFormulas) {
  Schedule s;
  s.family = ScheduleFamily::non_smooth;
  s.alpha_mult = 1.0;
  s.u_mult = 1.0;
  s.constants.R = 1.0;
  s.constants.L = 1.0;
  s.constants.d = 4;
  const auto ss = schedule_at(s, 1);
  EXPECT_NEAR(ss.u1, 1.0, 1e-15);
  EXPECT_NEAR(ss.u2, 0.0625, 1e-15);
  EXPECT_NEAR(ss.alpha, 1.0 / std::sqrt(4.0 * std::log(8.0)), 1e-15);
}

TEST(ScheduleAt, NonSmoothRequiresDimensionAtLeastTwo) {
  Schedule s;
  s.family = ScheduleFamily::non_smooth;
  s.constants.d = 1;
  EXPECT_THROW(schedule_at(s, 1), ConfigError);
}

TEST(ScheduleAt, MonotoneAndRatioInvariant) {
  Schedule s;
  s.family = ScheduleFamily::non_smooth;
  s.alpha_mult = 0.7;
  s.u_mult = 1.3;
  s.constants.R = 2.0;
  s.constants.L = 1.5;
  s.constants.d = 8;
  StepSizes prev = schedule_at(s, 1);
  for (long long t = 2; t <= 4096; t *= 2) {
    const StepSizes cur = schedule_at(s, t);
    EXPECT_LE(cur.alpha, prev.alpha);
    EXPECT_LE(cur.u1, prev.u1);
    EXPECT_LE(cur.u2, prev.u2);
    EXPECT_NEAR(cur.u2 / cur.u1, 1.0 / (64.0 * t), 1e-15);
    EXPECT_LE(cur.u2, cur.u1 / 2.0);
    prev = cur;
  }
}

TEST(ScheduleAt, LinearProblemsRunAtTheFloor) {
  ScheduleConstants c;
  c.R = 1.0;
  c.L1 = 0.0;  // linear
  const Schedule s = smooth_schedule(1.0, 1.0, c);
  EXPECT_EQ(schedule_at(s, 1).u1, 1e-10);
  EXPECT_EQ(schedule_at(s, 1000).u1, 1e-10);
}

TEST(Theorem1Bound, DirectEvaluation) {
  ScheduleConstants c;
  c.R = 1.0;
  c.L = 1.0;
  c.s_d = 4.0;
  const Schedule s = smooth_schedule(1.0, 1.0, c);
  EXPECT_NEAR(theorem1_bound(s, 4), 2.0 + 0.5 + 2.0 * std::log(8.0) / 4.0,
              1e-12);
  // max{alpha, 1/alpha}: halving alpha doubles the leading term
  const Schedule s_half = smooth_schedule(0.5, 1.0, c);
  const double lead = 2.0 * 2.0 / 2.0;
  EXPECT_NEAR(theorem1_bound(s_half, 4) - theorem1_bound(s, 4),
              lead * 2.0 - lead - 0.5 * 0.5, 1e-12);
  // decreasing in T for T >= 3
  double prev = theorem1_bound(s, 3);
  for (long long T = 4; T < 4000; T *= 2) {
    const double cur = theorem1_bound(s, T);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_THROW(theorem1_bound(Schedule{}, 0), ContractViolation);
}

TEST(Theorem2BoundShape, DirectEvaluation) {
  Schedule s;
  s.family = ScheduleFamily::non_smooth;
  s.alpha_mult = 1.0;
  s.u_mult = 1.0;
  s.constants.R = 1.0;
  s.constants.L = 1.0;
  s.constants.d = 4;
  EXPECT_NEAR(theorem2_bound_shape(s, 100),
              std::sqrt(4.0 * std::log(8.0)) / 10.0 +
                  2.0 * std::log(200.0) / 100.0,
              1e-12);
  EXPECT_NO_THROW(theorem2_bound_shape(s, 3));
  EXPECT_THROW(theorem2_bound_shape(s, 2), ContractViolation);
  Schedule wrong = s;
  wrong.family = ScheduleFamily::smooth;
  EXPECT_THROW(theorem2_bound_shape(wrong, 100), ConfigError);
  // doubling d at fixed large T scales the leading term by
  // sqrt(2 log(4d) / log(2d)); 1.633 at d = 4, below 1.6 from d = 8 on
  for (int d = 4; d <= 64; d *= 2) {
    Schedule s1 = s, s2 = s;
    s1.constants.d = d;
    s2.constants.d = 2 * d;
    const double r = (theorem2_bound_shape(s2, 1000000) /
                      theorem2_bound_shape(s1, 1000000));
    EXPECT_GT(r, std::sqrt(2.0) - 1e-9);
    EXPECT_LT(r, d == 4 ? 1.64 : 1.6);
  }
}

TEST(Run, FullInfoNoiselessQuadraticConverges) {
  const int d = 4;
  const Domain dom{2.0, 1.0, d};
  const Vec ts = make_vec({0.5, 0.0, 0.0, 0.0});
  const auto problem = make_smooth_quadratic(d, ts, dom, 0.0);
  EstimatorConfig est;
  est.kind = EstimatorKind::full_info;
  Schedule sched;
  sched.family = ScheduleFamily::full_info;
  sched.alpha_mult = 0.5;
  const auto rec = run(problem, ProxGeometry::euclidean(), dom, est, sched,
                       10000, 1);
  const double initial = rec.trace.front().second;
  EXPECT_LT(rec.final_gap, 1e-2 * initial);
  double prev = kInf;
  for (const auto& [t, gap] : rec.trace)
    if (t >= 10) {
      EXPECT_LE(gap, prev + 1e-12);
      prev = gap;
    }
  EXPECT_EQ(rec.evaluations_total, 0);
}

TEST(Run, SingleIterationAveragesTheInitialPoint) {
  const int d = 3;
  const Domain dom{2.0, 1.0, d};
  const Vec ts = make_vec({0.5, 0, 0});
  const auto problem = make_smooth_quadratic(d, ts, dom, 0.0);
  EstimatorConfig est;
  est.kind = EstimatorKind::full_info;
  Schedule sched;
  sched.family = ScheduleFamily::full_info;
  const auto rec = run(problem, ProxGeometry::euclidean(), dom, est, sched, 1, 7);
  EXPECT_EQ(rec.final_avg_iterate, dom.center());
  EXPECT_EQ(rec.final_gap, problem.f_exact(dom.center()) - 0.0);
}

TEST(Run, DeterministicRecords) {
  const int d = 4;
  const Domain dom{2.0, 1.0, d};
  const auto problem =
      make_smooth_quadratic(d, make_vec({0.3, 0, 0, 0}), dom, 0.5);
  EstimatorConfig est;
  est.kind = EstimatorKind::two_point;
  est.dist = {SmoothingKind::sphere, d};
  const ProxGeometry geom = ProxGeometry::euclidean();
  const Schedule sched =
      derive_schedule(problem, geom, dom, est, ScheduleFamily::smooth, 0.5, 1.0);
  const auto a = run(problem, geom, dom, est, sched, 500, 42);
  const auto b = run(problem, geom, dom, est, sched, 500, 42);
  EXPECT_EQ(record_fingerprint(a), record_fingerprint(b));
  const auto c = run(problem, geom, dom, est, sched, 500, 43);
  EXPECT_NE(record_fingerprint(a), record_fingerprint(c));
  EXPECT_EQ(a.evaluations_total, 1000);  // 2 evals per step
}

TEST(Run, IteratesStayFeasible) {
  const int d = 4;
  const Domain dom{1.0, 1.0, d};  // l1 ball
  const auto problem =
      make_nonsmooth_norm(d, make_vec({0.25, 0.25, 0, 0}), 1.0, dom, 0.5);
  EstimatorConfig est;
  est.kind = EstimatorKind::double_smoothed;
  est.dist1 = {SmoothingKind::ball, d};
  est.dist2 = {SmoothingKind::sphere, d};
  const ProxGeometry geom = ProxGeometry::euclidean();
  const Schedule sched = derive_schedule(problem, geom, dom, est,
                                         ScheduleFamily::non_smooth, 1.0, 1.0);
  RunOptions opts;
  int violations = 0;
  opts.observer = [&](long long, const Vec& theta) {
    if (!dom.contains(theta)) ++violations;
  };
  run(problem, geom, dom, est, sched, 2000, 5, opts);
  EXPECT_EQ(violations, 0);
}

TEST(Run, MismatchedFamiliesAreConfigErrors) {
  const int d = 4;
  const Domain dom{2.0, 1.0, d};
  const auto problem = make_smooth_quadratic(d, Vec::Zero(d), dom, 0.0);
  const ProxGeometry geom = ProxGeometry::euclidean();
  EstimatorConfig ds;
  ds.kind = EstimatorKind::double_smoothed;
  ds.dist1 = {SmoothingKind::ball, d};
  ds.dist2 = {SmoothingKind::sphere, d};
  Schedule smooth;
  smooth.family = ScheduleFamily::smooth;
  EXPECT_THROW(run(problem, geom, dom, ds, smooth, 10, 1), ConfigError);
  EstimatorConfig bad_pair = ds;
  bad_pair.dist1 = {SmoothingKind::sphere, d};
  Schedule ns;
  ns.family = ScheduleFamily::non_smooth;
  ns.constants.d = d;
  EXPECT_THROW(run(problem, geom, dom, bad_pair, ns, 10, 1), ConfigError);
}

TEST(Run, PnormGeometryOnTheL1Ball) {
  // hypercube smoothing + p-norm prox over the l1 ball
  // signal level delta from a short design horizon, then run well past it
  const int d = 8;
  const Domain dom{1.0, 1.0, d};
  const auto problem = make_gaussian_linear(d, 1.0, 100, 1.0, 1.0, 3u);
  const ProxGeometry geom = ProxGeometry::pnorm_for_dim(d);
  EstimatorConfig est;
  est.kind = EstimatorKind::two_point;
  est.dist = {SmoothingKind::hypercube, d};
  const Schedule sched =
      derive_schedule(problem, geom, dom, est, ScheduleFamily::smooth, 1.0, 1.0);
  double sum_final = 0.0, sum_init = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto rec = run(problem, geom, dom, est, sched, 5000, mix64(50, rep));
    sum_init += rec.trace.front().second;
    sum_final += rec.final_gap;
    EXPECT_LE(rec.final_avg_iterate.lpNorm<1>(), dom.radius * (1.0 + 1e-9));
  }
  EXPECT_LT(sum_final, 0.5 * sum_init);
}

TEST(Run, AlphaMisspecificationDegradesAtMostLinearly) {
  const int d = 4;
  const Domain dom{2.0, 1.0, d};
  const auto problem =
      make_smooth_quadratic(d, make_vec({0.5, 0, 0, 0}), dom, 1.0);
  const ProxGeometry geom = ProxGeometry::euclidean();
  EstimatorConfig est;
  est.kind = EstimatorKind::two_point;
  est.dist = {SmoothingKind::sphere, d};
  std::vector<double> mean_gaps;
  for (double a : {0.25, 1.0, 4.0}) {
    const Schedule sched =
        derive_schedule(problem, geom, dom, est, ScheduleFamily::smooth, a, 1.0);
    double sum = 0.0;
    const int reps = 8;
    for (int r = 0; r < reps; ++r)
      sum += run(problem, geom, dom, est, sched, 2000, mix64(100, r)).final_gap;
    mean_gaps.push_back(sum / reps);
  }
  for (double x : mean_gaps)
    for (double y : mean_gaps) EXPECT_LE(x / y, 8.0);
}
