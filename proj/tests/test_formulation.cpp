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

#include <cmath>
#include <set>

#include "blockbid/oracle.hpp"
#include "blockbid/run.hpp"
#include "blockbid/scenarios.hpp"

using namespace blockbid;
using formulation::Kind;
using formulation::Variant;
using scenarios::flat_scenario;
using scenarios::seeded_scenario;

namespace {

RunOptions options(Kind kind, std::size_t R = 1, double gap = 1e-6) {
  RunOptions o;
  o.kind = kind;
  o.cfg.R = R;
  o.cfg.mipGap = gap;
  return o;
}

Scenario zero_scenario(std::size_t T) { return flat_scenario(T, 30.0, 0.0, 0.0); }

// The T=6 toy: no rebound, flat spot of 30 EUR/MWh, default responsiveness.
Scenario toy_scenario() { return flat_scenario(6, 30.0, -4.0, -6.0); }

double tolerance(const RunResult& r) {
  return r.formulation.chordErrorBound + 1e-6 * (1.0 + std::abs(r.solution.objective));
}

}  // namespace

TEST(Formulation, BinaryCountsAtFullDay) {
  const auto s = flat_scenario(24, 40.0, -3.0, -3.0);
  const auto curves = formulation::make_curves(s, 1);
  const auto brute = build_model(s, curves, options(Kind::Brute));
  const auto logical = build_model(s, curves, options(Kind::Logical));
  EXPECT_EQ(brute.model.num_binaries(), 24u + 253u + 120u);
  EXPECT_EQ(logical.model.num_binaries(), 2u * 25u + 2u * 24u + 24u * 5u);
  EXPECT_EQ(brute.brute.hourly.size(), 24u);
  EXPECT_EQ(brute.brute.blocks.size(), 253u);
}

TEST(Formulation, BinaryCountsGrowWithRefinement) {
  const auto s = flat_scenario(8, 40.0, -3.0, -3.0);
  const auto curves = formulation::make_curves(s, 4);
  const auto brute = build_model(s, curves, options(Kind::Brute, 4));
  const auto logical = build_model(s, curves, options(Kind::Logical, 4));
  const std::size_t pwl = 8 * 5 * 4;
  EXPECT_EQ(brute.model.num_binaries(), 8u + 21u + pwl);
  EXPECT_EQ(logical.model.num_binaries(), 2u * 9u + 2u * 8u + pwl);
}

TEST(Formulation, ZeroFlexibilityGivesNoOrders) {
  for (Kind k : {Kind::Brute, Kind::Logical}) {
    const auto r = run_scenario(zero_scenario(6), options(k));
    ASSERT_TRUE(r.has_incumbent());
    EXPECT_NEAR(r.solution.objective, 0.0, 1e-9);
    EXPECT_TRUE(r.book.empty());
    if (k == Kind::Logical) {
      for (auto v : r.formulation.logical.order) EXPECT_NEAR(r.solution.values[v], 0.0, 1e-9);
    }
  }
}

TEST(Formulation, NonPositiveSpotGivesZero) {
  auto s = flat_scenario(6, 0.0, -4.0, -6.0);
  s.prices.values = {0.0, -5.0, -1.0, 0.0, -20.0, -0.5};
  for (Kind k : {Kind::Brute, Kind::Logical}) {
    const auto r = run_scenario(s, options(k));
    EXPECT_NEAR(r.solution.objective, 0.0, 1e-9) << formulation::to_string(k);
  }
}

TEST(Formulation, ToyMatchesOracle) {
  const auto s = toy_scenario();
  const auto brute = run_scenario(s, options(Kind::Brute, 4));
  const auto logical = run_scenario(s, options(Kind::Logical, 4));
  const auto orc = oracle::oracle_solve(s, brute.curves.pwl, brute.curves.cost,
                                        oracle::enumerate_structures(6));
  EXPECT_NEAR(brute.solution.objective, orc.objective, tolerance(brute));
  EXPECT_NEAR(logical.solution.objective, orc.objective, tolerance(logical));
  EXPECT_GE(solver::lp_relax(logical.formulation.model), orc.objective - 1e-6);
  EXPECT_GE(solver::lp_relax(brute.formulation.model), orc.objective - 1e-6);
  EXPECT_GT(orc.objective, 0.0);
}

TEST(Formulation, ToyPlacesABlock) {
  const auto r = run_scenario(toy_scenario(), options(Kind::Logical, 4));
  EXPECT_GE(r.book.count(OrderKind::Block), 1u);
  EXPECT_TRUE(check_legality(r.book, 6).ok());
}

TEST(Logical, HandWalkedSequenceDecodesToOneBlock) {
  const auto s = toy_scenario();
  const auto curves = formulation::make_curves(s, 1);
  auto f = build_model(s, curves, options(Kind::Logical));
  const std::vector<double> order{0, 1, 1, 1, 0, 0, 0}, dup{0, 0, 1, 1, 0, 0, 0};
  for (std::size_t t = 0; t <= 6; ++t) {
    f.model.set_bounds(f.logical.order[t], order[t], order[t]);
    f.model.set_bounds(f.logical.duplicate[t], dup[t], dup[t]);
  }
  auto [sol, trace] = solver::solve(f.model, options(Kind::Logical).cfg);
  ASSERT_TRUE(sol.has_incumbent());
  const auto book = formulation::decode(f, sol.values);
  ASSERT_EQ(book.size(), 1u);
  EXPECT_EQ(book.orders[0].kind, OrderKind::Block);
  EXPECT_EQ(book.orders[0].start, 0u);
  EXPECT_EQ(book.orders[0].duration, 3u);
}

TEST(Logical, IllegalStateIsInfeasible) {
  const auto s = toy_scenario();
  const auto curves = formulation::make_curves(s, 1);
  auto f = build_model(s, curves, options(Kind::Logical));
  f.model.set_bounds(f.logical.order[3], 0, 0);
  f.model.set_bounds(f.logical.duplicate[3], 1, 1);
  auto [sol, trace] = solver::solve(f.model, options(Kind::Logical).cfg);
  EXPECT_EQ(sol.status, solver::SolveStatus::Infeasible);
  EXPECT_FALSE(sol.certificate.empty());
}

TEST(Logical, ShortDuplicateRunIsInfeasible) {
  const auto s = toy_scenario();
  const auto curves = formulation::make_curves(s, 1);
  auto f = build_model(s, curves, options(Kind::Logical));
  // order, duplicate, then a fresh order: a two-hour block.
  const std::vector<double> order{0, 1, 1, 1, 0, 0, 0}, dup{0, 0, 1, 0, 0, 0, 0};
  for (std::size_t t = 0; t <= 6; ++t) {
    f.model.set_bounds(f.logical.order[t], order[t], order[t]);
    f.model.set_bounds(f.logical.duplicate[t], dup[t], dup[t]);
  }
  auto [sol, trace] = solver::solve(f.model, options(Kind::Logical).cfg);
  EXPECT_EQ(sol.status, solver::SolveStatus::Infeasible);
}

TEST(Logical, ProfileVariantNeverWorse) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto s = seeded_scenario(6, seed);
    auto reg = options(Kind::Logical, 2);
    auto prof = reg;
    prof.variant = Variant::Profile;
    const auto a = run_scenario(s, reg);
    const auto b = run_scenario(s, prof);
    EXPECT_GE(b.solution.objective, a.solution.objective - 1e-6) << s.label;
    for (const auto& o : b.book.orders) EXPECT_NE(o.kind, OrderKind::Block);
  }
}

TEST(Formulation, SolutionsAreLegalAndConsistent) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto s = seeded_scenario(6, seed);
    for (Kind k : {Kind::Brute, Kind::Logical}) {
      const auto r = run_scenario(s, options(k, 2));
      ASSERT_TRUE(r.has_incumbent());
      EXPECT_TRUE(check_legality(r.book, 6).ok()) << s.label;
      EXPECT_TRUE(flexibility_feasible(s.hourModel, r.evaluation.flexHour, 1e-6));
      EXPECT_TRUE(flexibility_feasible(s.blockModel, r.evaluation.flexBlock, 1e-6));
      // Chord costs sit on or below the exact quadratic, so profit can only
      // exceed the model objective, by at most the chord bound.
      EXPECT_GE(r.evaluation.profit, r.solution.objective - 1e-6);
      EXPECT_LE(r.evaluation.profit, r.solution.objective + tolerance(r));
      EXPECT_TRUE(r.trace.monotone());
    }
  }
}

TEST(Formulation, BlockBonusExcludedFromMarketObjective) {
  const auto s = toy_scenario();
  auto plain = options(Kind::Logical, 2);
  auto bonus = plain;
  bonus.cfg.blockBonus = true;
  const auto a = run_scenario(s, plain);
  const auto b = run_scenario(s, bonus);
  EXPECT_NEAR(b.evaluation.marketObjective, a.solution.objective, 1e-5);
  EXPECT_GT(b.solution.objective, b.evaluation.marketObjective);
}

TEST(Formulation, Errors) {
  const auto s = toy_scenario();
  const auto curves = formulation::make_curves(s, 1);
  auto opt = options(Kind::Brute);
  opt.variant = Variant::Profile;
  EXPECT_THROW(build_model(s, curves, opt), DomainError);
  const auto tiny = flat_scenario(2, 30.0, -1.0, -1.0);
  EXPECT_THROW(build_model(tiny, formulation::make_curves(tiny, 1), options(Kind::Logical)),
               DomainError);
  auto bad = s;
  bad.hourModel.profile.values[0] = 1.0;
  EXPECT_THROW(run_scenario(bad, options(Kind::Logical)), DomainError);
  auto smallM = options(Kind::Logical);
  smallM.cfg.bigM = 10.0;
  EXPECT_THROW(run_scenario(s, smallM), DomainError);
  EXPECT_THROW(formulation::kind_from_string("greedy"), Error);
}

TEST(Formulation, TagsMarkConstraintFamilies) {
  const auto s = toy_scenario();
  const auto f = build_model(s, formulation::make_curves(s, 1), options(Kind::Logical));
  std::set<std::string> tags;
  for (const auto& [name, tag] : f.model.metadata()) tags.insert(tag);
  EXPECT_GE(tags.size(), 8u);
}
