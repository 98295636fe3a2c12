// Copyright 2026 The Blockbid Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "blockbid/core.hpp"
#include "blockbid/responsiveness.hpp"

using namespace blockbid;

namespace {

FlexibilityModel make_model(std::vector<double> profile) {
  FlexibilityModel m;
  m.cem = CrossElasticityMatrix(profile.size());
  m.profile.values = std::move(profile);
  return m;
}

Scenario zero_scenario(std::size_t T) {
  Scenario s;
  s.grid.hours = T;
  s.hourModel = make_model(std::vector<double>(T, 0.0));
  s.blockModel = make_model(std::vector<double>(T, 0.0));
  s.prices.values.assign(T, 30.0);
  return s;
}

const std::vector<double> kBreakpoints{0, 5, 10, 15, 20, 25};

}  // namespace

TEST(Validate, ZeroScenarioIsClean) {
  EXPECT_TRUE(validate_scenario(zero_scenario(6)).ok());
}

TEST(Validate, DiagonalEntry) {
  auto s = zero_scenario(4);
  s.hourModel.cem(1, 1) = -0.1;
  const auto rep = validate_scenario(s);
  EXPECT_TRUE(rep.contains("nonzero diagonal"));
  EXPECT_NE(rep.str().find("hourModel.cem[2][2]"), std::string::npos);
}

TEST(Validate, PositiveFlexibility) {
  auto s = zero_scenario(4);
  s.blockModel.profile.values[2] = 1.0;
  const auto rep = validate_scenario(s);
  ASSERT_TRUE(rep.contains("positive flexibility"));
  EXPECT_EQ(rep.violations.front().location, "blockModel.profile[3]");
}

TEST(Validate, CollectsEveryProblem) {
  auto s = zero_scenario(4);
  s.hourModel.cem(0, 2) = -0.2;
  s.hourModel.cem(2, 0) = 0.3;
  s.prices.values.pop_back();
  s.responsiveness.b = 0.1;
  const auto rep = validate_scenario(s);
  EXPECT_TRUE(rep.contains("upper triangular entry"));
  EXPECT_TRUE(rep.contains("positive cross elasticity"));
  EXPECT_TRUE(rep.contains("dimension mismatch"));
  EXPECT_TRUE(rep.contains("nonnegative price sensitivity"));
}

TEST(Validate, ShortHorizon) {
  EXPECT_TRUE(validate_scenario(zero_scenario(2)).contains("horizon too short"));
}

TEST(TotalFlexibility, Sums) {
  EXPECT_EQ(total_flexibility({{-1, 0}, {0, -2}}), (std::vector<double>{-1, -2}));
  EXPECT_EQ(total_flexibility({{0}, {0}}), (std::vector<double>{0}));
  EXPECT_EQ(total_flexibility({{-0.5, -0.5, 0}, {0, -1, -1}}),
            (std::vector<double>{-0.5, -1.5, -1}));
  EXPECT_THROW(total_flexibility({{-1}, {0, 0}}), DimensionError);
}

TEST(Feasibility, BoxWithoutRebound) {
  const auto m = make_model({-2, -2});
  EXPECT_TRUE(flexibility_feasible(m, std::vector<double>{0, 0}));
  EXPECT_TRUE(flexibility_feasible(m, std::vector<double>{-2, -2}));
  EXPECT_FALSE(flexibility_feasible(m, std::vector<double>{-2.1, -2}));
  EXPECT_FALSE(flexibility_feasible(m, std::vector<double>{0.1, 0}));
}

TEST(Feasibility, ReboundShrinksLaterHour) {
  auto m = make_model({-2, -2});
  m.cem(1, 0) = -0.5;
  const std::vector<double> f{-2, -1};
  EXPECT_DOUBLE_EQ(flexibility_lower_bound(m, f, 1), -1.0);
  EXPECT_TRUE(flexibility_feasible(m, f));
  EXPECT_FALSE(flexibility_feasible(m, std::vector<double>{-2, -1.5}));
}

TEST(Feasibility, ZeroAlwaysFeasible) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = make_model(std::vector<double>(8));
    for (auto& v : m.profile.values) v = u(rng);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < i; ++j) m.cem(i, j) = u(rng) / 10.0;
    }
    EXPECT_TRUE(flexibility_feasible(m, std::vector<double>(8, 0.0)));
  }
}

TEST(Profit, Examples) {
  EXPECT_DOUBLE_EQ(profit(std::vector<double>{0.0}, {{30}}, std::vector<double>{25}), 0.0);
  EXPECT_DOUBLE_EQ(profit(std::vector<double>{-1.0}, {{30}}, std::vector<double>{25}), 5.0);
  EXPECT_DOUBLE_EQ(profit(std::vector<double>{-2.0, -1.0}, {{30, 10}}, std::vector<double>{25, 25}),
                   -5.0);
}

TEST(Profit, PermutationInvariant) {
  std::vector<double> f{-1, -2.5, -0.25, -4}, paid{3, 7, 11, 0.5};
  PriceSeries spot{{40, 22, 18, 9}};
  const double base = profit(f, spot, paid);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<double> f2, p2;
    PriceSeries s2;
    for (auto i : perm) {
      f2.push_back(f[i]);
      p2.push_back(paid[i]);
      s2.values.push_back(spot[i]);
    }
    EXPECT_NEAR(profit(f2, s2, p2), base, 1e-12);
  }
}

TEST(Sigmoid, KnownValues) {
  const ResponsivenessCurve c{6.0, -0.4, 10.0, 25.0};
  EXPECT_DOUBLE_EQ(sigmoid_flexibility(c, 15.0), -5.0);
  EXPECT_NEAR(sigmoid_flexibility(c, 25.0), -9.820137900379084, 1e-12);
  EXPECT_NEAR(sigmoid_flexibility(c, 0.0), -0.024726231566347744, 1e-15);
  EXPECT_THROW(sigmoid_flexibility(c, 26.0), DomainError);
  EXPECT_THROW(sigmoid_flexibility(c, -1.0), DomainError);
}

TEST(Sigmoid, StrictlyDecreasingAndBounded) {
  for (double f : {5.0, 10.0, 20.0}) {
    const ResponsivenessCurve c{6.0, -0.4, f, 25.0};
    double prev = 1.0;
    for (int i = 0; i <= 250; ++i) {
      const double v = sigmoid_flexibility(c, i * 0.1);
      EXPECT_LT(v, prev);
      EXPECT_LT(std::abs(v), f);
      prev = v;
    }
  }
}

TEST(Pwl, OnePiece) {
  const auto pwl = build_pwl({6.0, -0.4, 10.0, 25.0}, {0.0, 25.0});
  ASSERT_EQ(pwl.pieces(), 1u);
  EXPECT_NEAR(pwl.slopes[0], -0.3918164667525095, 1e-15);
}

TEST(Pwl, ThreeBreakpoints) {
  const auto pwl = build_pwl({6.0, -0.4, 10.0, 25.0}, {0.0, 15.0, 25.0});
  EXPECT_NEAR(pwl.values[0], -0.024726231566347744, 1e-15);
  EXPECT_DOUBLE_EQ(pwl.values[1], -5.0);
  EXPECT_NEAR(pwl.values[2], -9.820137900379084, 1e-12);
}

TEST(Pwl, ExactAtBreakpoints) {
  for (double f : {20.0, 10.0, 5.0}) {
    const ResponsivenessCurve c{6.0, -0.4, f, 25.0};
    const auto pwl = build_pwl(c, kBreakpoints);
    EXPECT_EQ(pwl.pieces(), 5u);
    EXPECT_EQ(pwl_flexibility(pwl, 0.0), 0.0);
    for (std::size_t k = 0; k < kBreakpoints.size(); ++k) {
      const double want = sigmoid_flexibility(c, kBreakpoints[k]) - sigmoid_flexibility(c, 0.0);
      EXPECT_LE(std::abs(pwl_flexibility(pwl, kBreakpoints[k]) - want), 1e-12 * std::abs(want));
    }
  }
}

TEST(Pwl, Interpolates) {
  const auto pwl = build_pwl({6.0, -0.4, 10.0, 25.0}, kBreakpoints);
  EXPECT_NEAR(pwl_flexibility(pwl, 12.5), -3.0712883785442404, 1e-12);
  EXPECT_EQ(pwl_piece(pwl, 10.0), 1u);
  EXPECT_EQ(pwl_piece(pwl, 10.000001), 2u);
  EXPECT_EQ(pwl_piece(pwl, 0.0), 0u);
}

TEST(Pwl, RefinementImprovesFit) {
  const ResponsivenessCurve c{6.0, -0.4, 10.0, 25.0};
  auto maxDev = [&](std::size_t pieces) {
    std::vector<double> bp;
    for (std::size_t k = 0; k <= pieces; ++k) bp.push_back(25.0 * k / pieces);
    const auto pwl = build_pwl(c, bp);
    double dev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double p = 25.0 * i / 1000;
      dev = std::max(dev, std::abs(pwl_flexibility(pwl, p) -
                                   (sigmoid_flexibility(c, p) - sigmoid_flexibility(c, 0.0))));
    }
    return dev;
  };
  EXPECT_LT(maxDev(10), maxDev(5));
  EXPECT_LT(maxDev(20), maxDev(10));
}

TEST(Pwl, RejectsBadBreakpoints) {
  const ResponsivenessCurve c;
  EXPECT_THROW(build_pwl(c, {0.0}), DomainError);
  EXPECT_THROW(build_pwl(c, {1.0, 25.0}), DomainError);
  EXPECT_THROW(build_pwl(c, {0.0, 20.0}), DomainError);
  EXPECT_THROW(build_pwl(c, {0.0, 10.0, 10.0, 25.0}), DomainError);
  EXPECT_THROW(build_pwl({6.0, 0.4, 10.0, 25.0}, {0.0, 25.0}), DomainError);
}

TEST(CostCurve, OneChordPerPiece) {
  const auto pwl = build_pwl({6.0, -0.4, 10.0, 25.0}, kBreakpoints);
  const auto cost = build_cost_curve(pwl, 1);
  ASSERT_EQ(cost.size(), 5u);
  for (double p : kBreakpoints) EXPECT_NEAR(chord_cost(cost, p), exact_cost(pwl, p), 1e-12);
  EXPECT_EQ(chord_cost(cost, 0.0), 0.0);
}

TEST(CostCurve, ExactAtSamplesAndConservative) {
  const auto pwl = build_pwl({6.0, -0.4, 10.0, 25.0}, kBreakpoints);
  const auto cost = build_cost_curve(pwl, 4);
  EXPECT_EQ(cost.size(), 20u);
  for (double p : cost.breakpoints()) EXPECT_NEAR(chord_cost(cost, p), exact_cost(pwl, p), 1e-12);
  for (int i = 0; i <= 500; ++i) {
    const double p = 25.0 * i / 500;
    EXPECT_LE(std::abs(chord_cost(cost, p) - exact_cost(pwl, p)), cost.maxChordError + 1e-12);
  }
}

TEST(CostCurve, RefiningShrinksChordError) {
  const auto pwl = build_pwl({6.0, -0.4, 10.0, 25.0}, kBreakpoints);
  double prev = build_cost_curve(pwl, 1).maxChordError;
  for (std::size_t R : {2u, 4u, 8u, 16u}) {
    const double e = build_cost_curve(pwl, R).maxChordError;
    EXPECT_LE(e, prev);
    prev = e;
  }
  EXPECT_LT(build_cost_curve(pwl, 4).maxChordError, build_cost_curve(pwl, 2).maxChordError);
}

TEST(CostCurve, MoreFlexibilityNeverCostsLess) {
  const auto pwl = build_pwl({6.0, -0.4, 20.0, 25.0}, kBreakpoints);
  const auto cost = build_cost_curve(pwl, 4);
  double prevCost = 1.0;
  double prevFlex = 1.0;
  for (int i = 0; i <= 250; ++i) {
    const double p = 0.1 * i;
    const double f = pwl_flexibility(pwl, p);
    const double c = chord_cost(cost, p);
    EXPECT_LE(c, 0.0);
    EXPECT_LE(f, prevFlex);
    EXPECT_LE(c, prevCost + 1e-12);
    prevCost = c;
    prevFlex = f;
  }
}

TEST(CostCurve, FlatPieceIsOneSegment) {
  PWLResponsiveness pwl;
  pwl.breakpoints = {0, 10, 25};
  pwl.values = {0, -2, -2};
  pwl.slopes = {-0.2, 0.0};
  const auto cost = build_cost_curve(pwl, 4);
  EXPECT_EQ(cost.size(), 5u);
  EXPECT_THROW(build_cost_curve(pwl, 0), DomainError);
}
