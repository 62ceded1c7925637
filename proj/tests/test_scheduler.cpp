#include <cmath>

#include <gtest/gtest.h>

#include "corridor/scheduler.hpp"

using namespace corridor;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Step table built by hand from per-step totals {MTP, EBLP, HOVLP}.
StepTable synthetic(const std::vector<std::array<double, 3>>& totals,
                    std::vector<Policy> allowed = {kAllPolicies.begin(), kAllPolicies.end()}) {
  StepTable t;
  t.t0_clock = 7.0;
  t.dt = 1.0 / 60.0;
  t.allowed = allowed;
  for (std::size_t k = 0; k < totals.size(); ++k) {
    StepRecord r;
    r.t_hours = static_cast<double>(k) * t.dt;
    r.q0 = 1000.0;
    r.bucket_q0 = 1000.0;
    r.total.fill(kNaN);
    std::optional<Policy> best;
    for (Policy p : kAllPolicies) {
      if (std::find(allowed.begin(), allowed.end(), p) == allowed.end()) continue;
      r.total[index_of(p)] = totals[k][index_of(p)];
      if (!best || r.total[index_of(p)] < r.total[index_of(*best)]) best = p;
    }
    r.best = *best;
    t.steps.push_back(r);
  }
  return t;
}

/// MTP cheapest except inside [a, b) where HOVLP is.
std::vector<std::array<double, 3>> windows(std::size_t n,
                                           std::vector<std::pair<std::size_t, std::size_t>> hov) {
  std::vector<std::array<double, 3>> out(n, {100.0, 120.0, 130.0});
  for (auto [a, b] : hov) {
    for (std::size_t k = a; k < b; ++k) out[k] = {100.0, 120.0, 90.0};
  }
  return out;
}

void expect_partition(const Schedule& s, const StepTable& t) {
  ASSERT_FALSE(s.entries.empty());
  const std::size_t n = t.steps.size() - 1;
  EXPECT_DOUBLE_EQ(s.entries.front().t_entry, t.t0_clock);
  EXPECT_DOUBLE_EQ(s.entries.back().t_exit, t.t0_clock + static_cast<double>(n) * t.dt);
  double sum = 0.0;
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    EXPECT_LT(s.entries[k].t_entry, s.entries[k].t_exit);
    if (k > 0) {
      EXPECT_DOUBLE_EQ(s.entries[k].t_entry, s.entries[k - 1].t_exit);
      EXPECT_NE(s.entries[k].policy, s.entries[k - 1].policy);
    }
    sum += s.entries[k].cost;
  }
  EXPECT_NEAR(sum, s.combined_cumulative, 1e-9 * sum);
}

}  // namespace

TEST(BuildSchedule, SinglePolicyIsOneEntryWithZeroSavings) {
  const StepTable t = synthetic(std::vector<std::array<double, 3>>(61, {100.0, kNaN, kNaN}),
                                {Policy::mtp});
  const Schedule s = build_schedule(t);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].policy, Policy::mtp);
  EXPECT_NEAR(s.combined_cumulative, 100.0, 1e-9);
  EXPECT_EQ(s.savings_vs.at(Policy::mtp), 0.0);
}

TEST(BuildSchedule, RectangleRuleUsesLeftSamples) {
  std::vector<std::array<double, 3>> totals(3, {60.0, 90.0, 90.0});
  totals[2] = {6000.0, 6000.0, 6000.0};  // last sample governs nothing
  const Schedule s = build_schedule(synthetic(totals));
  EXPECT_NEAR(s.combined_cumulative, 2.0, 1e-12);
  EXPECT_NEAR(s.per_policy_cumulative.at(Policy::eblp), 3.0, 1e-12);
}

TEST(BuildSchedule, AlternatesThroughWindows) {
  const StepTable t = synthetic(windows(721, {{60, 180}, {420, 600}}));
  const Schedule s = build_schedule(t);
  ASSERT_EQ(s.entries.size(), 5u);
  const Policy expect[] = {Policy::mtp, Policy::hovlp, Policy::mtp, Policy::hovlp, Policy::mtp};
  for (int k = 0; k < 5; ++k) EXPECT_EQ(s.entries[k].policy, expect[k]);
  EXPECT_NEAR(s.entries[1].t_entry, 8.0, 1e-9);
  EXPECT_NEAR(s.entries[1].t_exit, 10.0, 1e-9);
  expect_partition(s, t);
}

TEST(BuildSchedule, MinDwellMergesShortRuns) {
  const StepTable t = synthetic(windows(241, {{30, 33}, {100, 160}}));
  const Schedule free = build_schedule(t, 0.0);
  const Schedule held = build_schedule(t, 10.0);
  EXPECT_EQ(free.entries.size(), 5u);
  ASSERT_EQ(held.entries.size(), 3u);
  EXPECT_EQ(held.entries[1].policy, Policy::hovlp);
  EXPECT_LE(free.combined_cumulative, held.combined_cumulative);
  expect_partition(held, t);
  for (const auto& e : held.entries) {
    if (&e != &held.entries.front() && &e != &held.entries.back()) {
      EXPECT_GE((e.t_exit - e.t_entry) * 60.0 + 1e-9, 10.0);
    }
  }
}

TEST(BuildSchedule, MinDwellPicksCheaperNeighbour) {
  // A short EBLP blip between MTP and HOVLP runs; over the blip HOVLP is cheaper.
  std::vector<std::array<double, 3>> totals(61, {100.0, 150.0, 160.0});
  for (std::size_t k = 30; k < 61; ++k) totals[k] = {150.0, 130.0, 90.0};
  for (std::size_t k = 28; k < 31; ++k) totals[k] = {120.0, 80.0, 100.0};
  const Schedule s = build_schedule(synthetic(totals), 5.0);
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries[1].policy, Policy::hovlp);
  EXPECT_NEAR(s.entries[1].t_entry, 7.0 + 28.0 / 60.0, 1e-9);
}

TEST(BuildSchedule, CombinedNeverWorseThanAnySinglePolicy) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(50.0, 150.0);
  std::vector<std::array<double, 3>> totals(200);
  for (auto& row : totals) row = {u(rng), u(rng), u(rng)};
  const StepTable t = synthetic(totals);
  const Schedule s = build_schedule(t);
  for (const auto& [p, w] : s.per_policy_cumulative) {
    EXPECT_LE(s.combined_cumulative, w + 1e-9);
    EXPECT_GE(s.savings_vs.at(p), 0.0);
  }
  expect_partition(s, t);
  const Schedule pair =
      build_schedule(synthetic(totals, {Policy::mtp, Policy::eblp}));
  EXPECT_LE(s.combined_cumulative, pair.combined_cumulative + 1e-9);
}

TEST(BuildSchedule, RejectsBadInput) {
  EXPECT_THROW(build_schedule(StepTable{}), ValidationError);
  const StepTable t = synthetic(windows(5, {}));
  EXPECT_THROW(build_schedule(t, -1.0), ValidationError);
}

TEST(EvaluateTrajectory, OnlyAllowedPoliciesAreScored) {
  Scenario s = preset("baseline");
  s.solver.grid_cells = 60;
  Trajectory traj;
  traj.values = {900.0, 900.4, 950.0, 1010.6};
  const StepTable t = evaluate_trajectory(s, traj, {Policy::mtp});
  ASSERT_EQ(t.steps.size(), 4u);
  for (const auto& r : t.steps) {
    EXPECT_EQ(r.best, Policy::mtp);
    EXPECT_TRUE(std::isnan(r.total[index_of(Policy::eblp)]));
  }
  EXPECT_EQ(t.steps[1].bucket_q0, 900.0);
  EXPECT_NEAR(t.max_quantization, 0.4, 1e-9);
  const Schedule sched = build_schedule(t);
  ASSERT_EQ(sched.entries.size(), 1u);
  EXPECT_NEAR(sched.entries[0].t_exit, 7.0 + 3.0 / 60.0, 1e-12);
}

TEST(EvaluateTrajectory, CacheSharesOptimaAcrossTrajectories) {
  Scenario s = preset("baseline");
  s.solver.grid_cells = 60;
  OptimumCache cache(s);
  Trajectory a, b;
  a.values = {800.0, 801.0};
  b.values = {800.2, 801.4};
  evaluate_trajectory(cache, a, {Policy::mtp, Policy::eblp});
  const std::size_t after_first = cache.size();
  evaluate_trajectory(cache, b, {Policy::mtp, Policy::eblp});
  EXPECT_EQ(cache.size(), after_first);
  EXPECT_EQ(cache.size(), 4u);
  EXPECT_EQ(OptimumCache::bucket(0.2), 1.0);
}

TEST(EvaluateTrajectory, HighDemandFavoursExclusiveBusLane) {
  Trajectory traj;
  traj.values.assign(6, 2500.0);
  const StepTable t = evaluate_trajectory(preset("baseline"), traj, {Policy::mtp, Policy::eblp});
  const Schedule s = build_schedule(t);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].policy, Policy::eblp);
}

TEST(EvaluateTrajectory, WiderChoiceNeverCostsMore) {
  Scenario s = preset("baseline");
  s.solver.grid_cells = 60;
  OptimumCache cache(s);
  const Trajectory traj = simulate(OUParams{}, 1.0, 1.0 / 60.0, 12);
  const double one = build_schedule(evaluate_trajectory(cache, traj, {Policy::mtp})).combined_cumulative;
  const double two =
      build_schedule(evaluate_trajectory(cache, traj, {Policy::mtp, Policy::eblp})).combined_cumulative;
  const double all = build_schedule(evaluate_trajectory(cache, traj, {Policy::mtp, Policy::eblp,
                                                                      Policy::hovlp}))
                         .combined_cumulative;
  EXPECT_LE(two, one + 1e-9);
  EXPECT_LE(all, two + 1e-9);
}
