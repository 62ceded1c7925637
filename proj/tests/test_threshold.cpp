#include <gtest/gtest.h>

#include "corridor/threshold.hpp"

using namespace corridor;

namespace {

Scenario baseline() { return preset("baseline"); }

// Fewer grid cells keep the sweeps quick; the ordering tests below do not
// depend on the last digits.
Scenario quick() {
  Scenario s = baseline();
  s.solver.grid_cells = 120;
  return s;
}

}  // namespace

TEST(CostCurve, TwoSamplesGiveTwoOptima) {
  const CostCurve c = cost_curve(baseline(), Policy::mtp, 400.0, 900.0, 2);
  ASSERT_EQ(c.samples.size(), 2u);
  EXPECT_EQ(c.samples[0].q0, 400.0);
  EXPECT_EQ(c.samples[1].q0, 900.0);
  for (const auto& sample : c.samples) EXPECT_TRUE(sample.optimum.has_value());
}

TEST(CostCurve, RejectsBadRanges) {
  EXPECT_THROW(cost_curve(baseline(), Policy::mtp, 400.0, 900.0, 1), ValidationError);
  EXPECT_THROW(cost_curve(baseline(), Policy::mtp, 900.0, 400.0, 3), ValidationError);
  EXPECT_THROW(cost_curve(baseline(), Policy::mtp, 0.0, 400.0, 3), ValidationError);
}

TEST(CostCurve, TotalsRiseWithDemand) {
  const Scenario s = quick();
  for (Policy p : kAllPolicies) {
    const CostCurve c = cost_curve(s, p, 200.0, 2400.0, 12);
    double prev = 0.0;
    for (const auto& sample : c.samples) {
      ASSERT_TRUE(sample.optimum) << sample.error;
      EXPECT_GE(sample.optimum->breakdown.total, prev) << to_string(p) << " " << sample.q0;
      prev = sample.optimum->breakdown.total;
    }
  }
}

TEST(CostCurve, PoliciesAgreeAtLowDemand) {
  const Scenario s = baseline();
  for (double q0 : {200.0, 400.0, 600.0}) {
    const double mtp = optimize_policy(s, Policy::mtp, q0).breakdown.total;
    for (Policy p : {Policy::eblp, Policy::hovlp}) {
      const double other = optimize_policy(s, p, q0).breakdown.total;
      EXPECT_LT(std::abs(other - mtp) / mtp, 0.05) << to_string(p) << " " << q0;
    }
  }
}

TEST(Threshold, SamePolicyIsEqual) {
  const ThresholdResult r = find_threshold(baseline(), Policy::eblp, Policy::eblp, 500.0, 900.0);
  EXPECT_TRUE(r.equal);
  EXPECT_FALSE(r.q0_star.has_value());
}

TEST(Threshold, DedicatedLaneOvertakesMixedTrafficAtHighDemand) {
  const Scenario s = quick();
  const ThresholdResult r = find_threshold(s, Policy::mtp, Policy::eblp, 1000.0, 3000.0);
  ASSERT_TRUE(r.q0_star.has_value());
  EXPECT_EQ(r.cheaper_below, Policy::mtp);
  EXPECT_EQ(r.cheaper_above, Policy::eblp);
  const double tol = s.solver.threshold_tolerance;
  EXPECT_LT(cost_difference(s, Policy::mtp, Policy::eblp, *r.q0_star - 2 * tol), 0.0);
  EXPECT_GT(cost_difference(s, Policy::mtp, Policy::eblp, *r.q0_star + 2 * tol), 0.0);
}

TEST(Threshold, NoCrossingReportsCheaperPolicy) {
  const Scenario s = quick();
  const ThresholdResult r = find_threshold(s, Policy::mtp, Policy::eblp, 300.0, 700.0);
  EXPECT_FALSE(r.q0_star.has_value());
  EXPECT_FALSE(r.equal);
  EXPECT_EQ(r.cheaper_below, r.cheaper_above);
  const double d = cost_difference(s, Policy::mtp, Policy::eblp, 700.0);
  EXPECT_EQ(r.cheaper_above, d <= 0.0 ? Policy::mtp : Policy::eblp);
}

TEST(Threshold, CheapLaneSignalCostMovesCrossingDown) {
  Scenario s = quick();
  const auto base = find_threshold(s, Policy::mtp, Policy::eblp, 1000.0, 3000.0);
  s.lane_costs.ebl_fixed = 0.0;
  s.lane_costs.ebl_variable = 0.0;
  const auto cheaper = find_threshold(s, Policy::mtp, Policy::eblp, 200.0, 3000.0);
  ASSERT_TRUE(base.q0_star && cheaper.q0_star);
  EXPECT_LE(*cheaper.q0_star, *base.q0_star + s.solver.threshold_tolerance);
}

TEST(Regions, SinglePolicyGivesOneRegion) {
  const RegionAnalysis r = policy_regions(quick(), 300.0, 2000.0, 100.0, {Policy::hovlp});
  ASSERT_EQ(r.regions.size(), 1u);
  EXPECT_EQ(r.regions[0].policy, Policy::hovlp);
  EXPECT_EQ(r.regions[0].q0_from, 300.0);
  EXPECT_EQ(r.regions[0].q0_to, 2000.0);
}

TEST(Regions, PartitionTheRangeWithDistinctNeighbours) {
  const Scenario s = quick();
  const RegionAnalysis r = policy_regions(s, 200.0, 2600.0, 100.0);
  ASSERT_FALSE(r.regions.empty());
  EXPECT_EQ(r.regions.front().q0_from, 200.0);
  EXPECT_EQ(r.regions.back().q0_to, 2600.0);
  for (std::size_t k = 0; k < r.regions.size(); ++k) {
    EXPECT_LE(r.regions[k].q0_from, r.regions[k].q0_to);
    if (k > 0) {
      EXPECT_EQ(r.regions[k].q0_from, r.regions[k - 1].q0_to);
      EXPECT_NE(r.regions[k].policy, r.regions[k - 1].policy);
    }
  }
  for (const auto& sample : r.samples) {
    for (std::size_t j = 0; j < r.allowed.size(); ++j) {
      ASSERT_TRUE(sample.totals[j]);
      EXPECT_LE(*sample.totals[index_of(sample.best)], *sample.totals[j]);
    }
  }
}

TEST(Regions, BoundaryMatchesPairwiseThreshold) {
  const Scenario s = quick();
  const RegionAnalysis r = policy_regions(s, 1000.0, 3000.0, 100.0, {Policy::mtp, Policy::eblp});
  const ThresholdResult t = find_threshold(s, Policy::mtp, Policy::eblp, 1000.0, 3000.0);
  ASSERT_EQ(r.regions.size(), 2u);
  ASSERT_TRUE(t.q0_star);
  EXPECT_NEAR(r.regions[0].q0_to, *t.q0_star, 2 * s.solver.threshold_tolerance);
}

TEST(Regions, TiesGoToFixedOrder) {
  const std::vector<Policy> allowed{Policy::hovlp, Policy::eblp, Policy::mtp};
  const std::vector<std::optional<double>> totals{5.0, 5.0, 5.0};
  EXPECT_EQ(detail::pointwise_best(allowed, totals), Policy::mtp);
  const std::vector<std::optional<double>> partial{5.0, 5.0, std::nullopt};
  EXPECT_EQ(detail::pointwise_best(allowed, partial), Policy::eblp);
}
