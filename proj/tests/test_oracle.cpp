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

#include <set>

#include "blockbid/oracle.hpp"
#include "blockbid/run.hpp"
#include "blockbid/scenarios.hpp"

using namespace blockbid;
using oracle::HourState;

TEST(Structures, SmallCounts) {
  EXPECT_EQ(oracle::enumerate_structures(3).size(), 9u);
  const auto two = oracle::enumerate_structures(2);
  EXPECT_EQ(two.size(), 4u);
  for (const auto& s : two) EXPECT_TRUE(s.blocks().empty());
  EXPECT_EQ(oracle::enumerate_structures(4).size(), oracle::count_structures(4));
}

TEST(Structures, EnumerationMatchesRecursion) {
  const std::vector<std::size_t> expect{1, 2, 4, 9, 21, 49, 114, 265, 616, 1432, 3329, 7739, 17991};
  for (std::size_t T = 0; T <= 12; ++T) EXPECT_EQ(oracle::count_structures(T), expect[T]);
  for (std::size_t T = 1; T <= 9; ++T) {
    const auto all = oracle::enumerate_structures(T);
    EXPECT_EQ(all.size(), expect[T]);
    std::set<std::string> keys;
    for (const auto& s : all) keys.insert(s.encoding());
    EXPECT_EQ(keys.size(), all.size());
  }
}

TEST(Structures, EveryStructureIsLegal) {
  for (const auto& st : oracle::enumerate_structures(8)) {
    OrderBook book;
    for (std::size_t t = 0; t < 8; ++t) {
      if (st.hours[t] == HourState::Hourly) book.orders.push_back({OrderKind::Hourly, t, 1, -1, {}});
    }
    for (const blockbid::Run& b : st.blocks()) book.orders.push_back({OrderKind::Block, b.start, b.length, -1, {}});
    EXPECT_TRUE(check_legality(book, 8).ok()) << st.encoding();
  }
}

TEST(Structures, HorizonGuard) {
  EXPECT_THROW(oracle::enumerate_structures(13), DomainError);
}

TEST(Oracle, ZeroScenario) {
  const auto s = scenarios::flat_scenario(4, 30.0, 0.0, 0.0);
  const auto c = formulation::make_curves(s, 1);
  const auto r = oracle::oracle_solve(s, c.pwl, c.cost, oracle::enumerate_structures(4));
  EXPECT_NEAR(r.objective, 0.0, 1e-9);
  EXPECT_TRUE(r.book.empty());
}

TEST(Oracle, DominatesHandBuiltBooks) {
  const auto s = scenarios::flat_scenario(3, 30.0, -4.0, -6.0);
  const auto c = formulation::make_curves(s, 4);
  const auto r = oracle::oracle_solve(s, c.pwl, c.cost, oracle::enumerate_structures(3));
  EXPECT_GE(r.bound, r.objective);
  EXPECT_TRUE(check_legality(r.book, 3).ok());
  // Each structure on its own is a hand-built book; the oracle beats all.
  for (const auto& st : oracle::enumerate_structures(3)) {
    const auto sub = oracle::build_restricted(s, c.pwl, c.cost, st, true);
    auto [sol, trace] = solver::solve(sub.model, {});
    if (sol.has_incumbent()) EXPECT_GE(r.objective, sol.objective - 1e-6) << st.encoding();
  }
}

TEST(Oracle, AgreesWithBothFormulations) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto s = scenarios::seeded_scenario(6, seed);
    RunOptions opt;
    opt.cfg.mipGap = 1e-6;
    opt.cfg.R = 2;
    const auto c = formulation::make_curves(s, 2);
    const auto orc = oracle::oracle_solve(s, c.pwl, c.cost, oracle::enumerate_structures(6));
    const double tol = 1e-5 * (1.0 + std::abs(orc.objective));
    for (auto k : {formulation::Kind::Brute, formulation::Kind::Logical}) {
      opt.kind = k;
      const auto r = run_scenario(s, opt);
      EXPECT_GE(r.solution.objective, orc.objective - tol) << s.label;
      EXPECT_LE(r.solution.objective, orc.bound + tol) << s.label;
    }
  }
}

TEST(Oracle, ProfileRelaxationNeverDecreases) {
  for (std::uint64_t seed = 4; seed <= 6; ++seed) {
    const auto s = scenarios::seeded_scenario(5, seed);
    const auto c = formulation::make_curves(s, 1);
    const auto all = oracle::enumerate_structures(5);
    oracle::OracleOptions prof;
    prof.equalVolume = false;
    const auto a = oracle::oracle_solve(s, c.pwl, c.cost, all);
    const auto b = oracle::oracle_solve(s, c.pwl, c.cost, all, prof);
    EXPECT_GE(b.objective, a.objective - 1e-9);
  }
}

TEST(Oracle, RejectsMismatchedStructures) {
  const auto s = scenarios::flat_scenario(4, 30.0, -1.0, -1.0);
  const auto c = formulation::make_curves(s, 1);
  EXPECT_THROW(oracle::oracle_solve(s, c.pwl, c.cost, oracle::enumerate_structures(3)),
               DimensionError);
}
