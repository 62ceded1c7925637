#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "corridor/numeric.hpp"

using namespace corridor;

TEST(CorridorGrid, NodesSpanCorridor) {
  const CorridorGrid g(30.0, 600);
  const auto x = g.nodes();
  ASSERT_EQ(x.size(), 601u);
  EXPECT_EQ(x.front(), 0.0);
  EXPECT_EQ(x.back(), 30.0);
  for (std::size_t k = 1; k < x.size(); ++k) EXPECT_LT(x[k - 1], x[k]);
}

TEST(CorridorGrid, RejectsOddOrEmptyCellCounts) {
  EXPECT_THROW(CorridorGrid(30.0, 7), NumericDomainError);
  EXPECT_THROW(CorridorGrid(30.0, 0), NumericDomainError);
  EXPECT_THROW(CorridorGrid(0.0, 10), NumericDomainError);
}

TEST(Integrate, ConstantAndLinearAreExact) {
  const CorridorGrid g(30.0, 600);
  EXPECT_NEAR(integrate([](double) { return 1.0; }, 0.0, 30.0, g), 30.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return x; }, 0.0, 30.0, g), 450.0, 1e-10);
}

TEST(Integrate, CubicIsExact) {
  const CorridorGrid g(2.0, 2);
  EXPECT_NEAR(integrate([](double x) { return x * x * x; }, 0.0, 2.0, g), 4.0, 1e-14);
}

TEST(Integrate, SineOverHalfPeriod) {
  const CorridorGrid g(std::numbers::pi, 256);
  const double v = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, g);
  EXPECT_LT(std::abs(v - 2.0), 1e-8);
}

TEST(Integrate, SubIntervalAndEmptyInterval) {
  const CorridorGrid g(10.0, 100);
  EXPECT_NEAR(integrate([](double x) { return 3 * x * x; }, 2.0, 5.0, g), 125.0 - 8.0, 1e-10);
  EXPECT_EQ(integrate([](double x) { return x; }, 4.0, 4.0, g), 0.0);
}

TEST(Integrate, RejectsBadLimits) {
  const CorridorGrid g(10.0, 10);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 5.0, 4.0, g), NumericDomainError);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, 11.0, g), NumericDomainError);
}

TEST(Integrate, NonFiniteValueNamesNode) {
  const CorridorGrid g(10.0, 10);
  try {
    integrate([](double x) { return x > 4.5 ? std::nan("") : 1.0; }, 0.0, 10.0, g);
    FAIL() << "expected NumericDomainError";
  } catch (const NumericDomainError& e) {
    EXPECT_NE(std::string(e.what()).find("node 5"), std::string::npos) << e.what();
  }
}

TEST(CumulativeIntegral, ZeroAndUnitIntegrands) {
  const CorridorGrid g(30.0, 30);
  for (double v : cumulative_integral([](double) { return 0.0; }, g)) EXPECT_EQ(v, 0.0);
  const auto ones = cumulative_integral([](double) { return 1.0; }, g);
  for (std::size_t k = 0; k < ones.size(); ++k) EXPECT_NEAR(ones[k], double(k), 1e-12);
}

TEST(CumulativeIntegral, LinearIntegrandGivesSquare) {
  const CorridorGrid g(10.0, 100);
  const auto v = cumulative_integral([](double x) { return 2 * x; }, g);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_NEAR(v.back(), 100.0, 1e-10);
  for (std::size_t k = 0; k < v.size(); k += 2) EXPECT_NEAR(v[k], g.node(k) * g.node(k), 1e-10);
}

TEST(CumulativeIntegral, LastEntryEqualsIntegrate) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const CorridorGrid g(10.0 * u(rng), 2 * (1 + trial));
    auto f = [&](double x) { return a + b * std::sin(c * x) + x * x; };
    EXPECT_EQ(cumulative_integral(f, g).back(), integrate(f, 0.0, g.length(), g));
  }
}

TEST(CumulativeIntegral, NonDecreasingForNonNegativeIntegrands) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng);
    const CorridorGrid g(30.0, 60);
    const auto v = cumulative_integral(
        [&](double x) { return std::pow(std::sin(a * x + b), 2.0) * std::exp(-x / 10); }, g);
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_GE(v[k], v[k - 1]);
  }
}

TEST(FindRoot, LinearAndSquareRoot) {
  EXPECT_NEAR(find_root([](double x) { return x - 1.0; }, 0.0, 2.0, 1e-9), 1.0, 1e-9);
  EXPECT_NEAR(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12), std::sqrt(2.0),
              1e-12);
}

TEST(FindRoot, NoSignChangeIsBracketError) {
  EXPECT_THROW(find_root([](double) { return 1.0; }, 0.0, 2.0, 1e-9), BracketError);
}

TEST(FindRoot, InvariantToSwappedBracket) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = u(rng);
    auto g = [&](double x) { return std::tanh(x - r); };
    EXPECT_EQ(find_root(g, -6.0, 6.0, 1e-10), find_root(g, 6.0, -6.0, 1e-10));
  }
}

TEST(GridMin, QuadraticRefinesToVertex) {
  GridSearch s{1.0, 10.0, 3, 0};
  const auto r = grid_min([](double x) { return (x - 3.0) * (x - 3.0); }, 0.0, 10.0, s);
  EXPECT_NEAR(r.argmin, 3.0, 1e-3);
}

TEST(GridMin, ConstantReturnsLowerBound) {
  const auto r = grid_min([](double) { return 7.0; }, 2.0, 9.0, GridSearch{1.0, 10.0, 2, 0});
  EXPECT_EQ(r.argmin, 2.0);
  EXPECT_EQ(r.min, 7.0);
}

TEST(GridMin, AbsoluteValueRefinesTowardKink) {
  const auto coarse = grid_min([](double x) { return std::abs(x - 2.5); }, 0.0, 5.0,
                               GridSearch{1.0, 10.0, 0, 0});
  const auto fine = grid_min([](double x) { return std::abs(x - 2.5); }, 0.0, 5.0,
                             GridSearch{1.0, 10.0, 2, 0});
  EXPECT_NEAR(coarse.argmin, 2.0, 1e-12);  // tie between 2 and 3 goes to the smaller
  EXPECT_NEAR(fine.argmin, 2.5, 1e-9);
  EXPECT_LE(fine.min, coarse.min);
}

TEST(GridMin, SkipsNonFinitePoints) {
  const auto r = grid_min(
      [](double x) { return x < 3.5 ? std::numeric_limits<double>::infinity() : x; }, 0.0, 10.0,
      GridSearch{1.0, 10.0, 0, 0});
  EXPECT_EQ(r.argmin, 4.0);
  EXPECT_EQ(r.skipped.size(), 4u);
  EXPECT_THROW(grid_min([](double) { return std::nan(""); }, 0.0, 1.0, GridSearch{0.5, 10.0, 0, 0}),
               NumericDomainError);
}

TEST(GridMin, NeverWorseThanAnyEvaluatedPoint) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng);
    std::vector<double> seen;
    auto f = [&](double x) {
      const double v = std::sin(a * x) + 0.1 * (x - b) * (x - b);
      seen.push_back(v);
      return v;
    };
    const auto r = grid_min(f, 0.0, 10.0, GridSearch{0.5, 10.0, 2, 0});
    for (double v : seen) EXPECT_LE(r.min, v);
  }
}

TEST(GridMin, PatienceStopsCoarseScanEarly) {
  int calls = 0;
  auto f = [&](double x) {
    ++calls;
    return (x - 2.0) * (x - 2.0);
  };
  const auto r = grid_min(f, 0.0, 100.0, GridSearch{1.0, 10.0, 0, 3});
  EXPECT_EQ(r.argmin, 2.0);
  EXPECT_EQ(calls, 6);
}

TEST(Power, MatchesPow) {
  for (double e : {0.0, 1.0, 2.0, 3.0, 4.0, 2.5}) {
    EXPECT_NEAR(power(1.7, e), std::pow(1.7, e), 1e-14);
  }
}

TEST(CumulativeSimpson, ExactForQuadraticsAtEveryNode) {
  const CorridorGrid g(3.0, 6);
  const auto v = cumulative_integral([](double x) { return 2.0 - x + 0.5 * x * x; }, g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.node(k);
    EXPECT_NEAR(v[k], 2.0 * x - 0.5 * x * x + x * x * x / 6.0, 1e-12) << k;
  }
}
