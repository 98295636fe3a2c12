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

#include <filesystem>
#include <random>

#include "blockbid/log.hpp"
#include "blockbid/mip/lp_format.hpp"
#include "blockbid/mip/model.hpp"
#include "blockbid/mip/mps_format.hpp"
#include "blockbid/mip/solution_io.hpp"

using namespace blockbid;
using namespace blockbid::mip;

namespace {

std::string golden(const std::string& name) {
  return read_text_file(std::string(BLOCKBID_SOURCE_DIR) + "/tests/golden/" + name);
}

MipModel one_row_model() {
  MipModel m;
  m.name = "golden";
  auto x = m.add_continuous("x", 0, 2.5);
  m.add_constraint("cap", LinExpr::var(x, 3.0), Sense::LessEqual, LinExpr(6.0), "demo");
  m.set_objective(LinExpr::var(x, 0.1), true);
  return m;
}

MipModel mixed_model(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-7.0, 7.0);
  MipModel m;
  std::vector<VarId> v;
  for (int i = 0; i < 6; ++i) v.push_back(m.add_binary("b" + std::to_string(i)));
  for (int i = 0; i < 6; ++i) v.push_back(m.add_continuous("f" + std::to_string(i), u(rng) - 8, 0));
  for (int r = 0; r < 9; ++r) {
    LinExpr e;
    for (auto id : v) {
      if (rng() % 2) e += LinExpr::var(id, u(rng) / 3.0);
    }
    const Sense s = r % 3 == 0 ? Sense::Equal : r % 3 == 1 ? Sense::LessEqual : Sense::GreaterEqual;
    m.add_constraint("row" + std::to_string(r), e, s, LinExpr(u(rng)), r % 2 ? "tag.odd" : "");
  }
  LinExpr obj(1.0 / 3.0);
  for (auto id : v) obj += LinExpr::var(id, u(rng));
  m.set_objective(obj, true);
  return m;
}

// Enumerates the 0/1 corners of (x, y) and reports the z values each allows.
std::vector<std::vector<double>> z_choices(bool conj) {
  std::vector<std::vector<double>> out;
  for (int x = 0; x <= 1; ++x) {
    for (int y = 0; y <= 1; ++y) {
      MipModel m;
      auto vx = m.add_binary("x"), vy = m.add_binary("y"), vz = m.add_binary("z");
      if (conj) {
        add_and(m, "g", Lit::of(vz), Lit::of(vx), Lit::of(vy));
      } else {
        add_or(m, "g", Lit::of(vz), Lit::of(vx), Lit::of(vy));
      }
      std::vector<double> ok;
      for (int z = 0; z <= 1; ++z) {
        std::vector<double> pt{double(x), double(y), double(z)};
        if (!first_violation(m, pt, 1e-9)) ok.push_back(z);
      }
      out.push_back(ok);
    }
  }
  return out;
}

}  // namespace

TEST(Gadgets, AndTruthTable) {
  const auto z = z_choices(true);
  EXPECT_EQ(z[0], (std::vector<double>{0}));
  EXPECT_EQ(z[1], (std::vector<double>{0}));
  EXPECT_EQ(z[2], (std::vector<double>{0}));
  EXPECT_EQ(z[3], (std::vector<double>{1}));
}

TEST(Gadgets, OrTruthTable) {
  const auto z = z_choices(false);
  EXPECT_EQ(z[0], (std::vector<double>{0}));
  EXPECT_EQ(z[1], (std::vector<double>{1}));
  EXPECT_EQ(z[2], (std::vector<double>{1}));
  EXPECT_EQ(z[3], (std::vector<double>{1}));
}

TEST(Gadgets, AndAdmitsFractionalDiagonal) {
  MipModel m;
  auto x = m.add_binary("x"), y = m.add_binary("y"), z = m.add_binary("z");
  add_and(m, "g", Lit::of(z), Lit::of(x), Lit::of(y));
  EXPECT_FALSE(first_violation(m, {0.5, 0.5, 0.5}, 1e-9).has_value());
  EXPECT_EQ(m.metadata().at("g_a"), "logic.and");
}

TEST(Gadgets, NegationIsSubstitution) {
  MipModel m;
  auto x = m.add_binary("x");
  const Lit nx = add_not_pair(m, x);
  EXPECT_EQ(m.num_vars(), 1u);
  const LinExpr e = nx.expr();
  EXPECT_EQ(e.constant, 1.0);
  ASSERT_EQ(e.terms.size(), 1u);
  EXPECT_EQ(e.terms[0].coef, -1.0);
  EXPECT_EQ((!Lit::constant(1)).value, 0);
  EXPECT_THROW(add_not_pair(m, 7), DomainError);
}

TEST(Gadgets, ConstantOperands) {
  MipModel m;
  auto x = m.add_binary("x"), z = m.add_binary("z");
  add_or(m, "g", Lit::of(z), Lit::of(x), Lit::constant(0));
  EXPECT_FALSE(first_violation(m, {0, 0}, 1e-9));
  EXPECT_TRUE(first_violation(m, {0, 1}, 1e-9));
  EXPECT_FALSE(first_violation(m, {1, 1}, 1e-9));
  MipModel k;
  EXPECT_TRUE(add_and(k, "c", Lit::constant(1), Lit::constant(1), Lit::constant(1)).empty());
  EXPECT_THROW(add_and(k, "c", Lit::constant(1), Lit::constant(0), Lit::constant(1)), DomainError);
}

TEST(Gadgets, BigMEquality) {
  MipModel m;
  auto a = m.add_continuous("a", -20, 0), b = m.add_continuous("b", -20, 0);
  auto p = m.add_binary("p"), q = m.add_binary("q");
  add_bigM_equal_if(m, "eq", LinExpr::var(a), LinExpr::var(b), p, q, 40.0);
  EXPECT_FALSE(first_violation(m, {-3, -3, 1, 1}, 1e-9));
  EXPECT_TRUE(first_violation(m, {-3, -2, 1, 1}, 1e-9));
  EXPECT_FALSE(first_violation(m, {-20, 0, 0, 0}, 1e-9));
  EXPECT_FALSE(first_violation(m, {0, -20, 0, 0}, 1e-9));
  EXPECT_FALSE(first_violation(m, {-5, -5, 0, 0}, 1e-9));
  EXPECT_THROW(add_bigM_equal_if(m, "bad", LinExpr::var(a), LinExpr::var(b), p, q, 0.0),
               DomainError);
}

TEST(Model, RejectsMalformedInput) {
  MipModel m;
  auto x = m.add_binary("x");
  EXPECT_THROW(m.add_binary("x"), DomainError);
  EXPECT_THROW(m.add_binary("y", 0, 2), DomainError);
  EXPECT_THROW(m.add_continuous("w", 1, 0), DomainError);
  EXPECT_THROW(m.add_constraint("c", LinExpr::var(9), Sense::LessEqual, 0.0), DomainError);
  EXPECT_THROW(m.add_constraint("c", LinExpr(1.0), Sense::LessEqual, 0.0), DomainError);
  EXPECT_FALSE(m.add_constraint("c", LinExpr::var(x) - LinExpr::var(x), Sense::LessEqual, 0.0));
  EXPECT_TRUE(m.validate().ok());
}

TEST(Model, MergesDuplicateTerms) {
  MipModel m;
  auto x = m.add_continuous("x", 0, 1), y = m.add_continuous("y", 0, 1);
  auto c = m.add_constraint("c", LinExpr::var(x, 2) + LinExpr::var(y) + LinExpr::var(x, -2) + 4.0,
                            Sense::GreaterEqual, LinExpr::var(y, 3));
  ASSERT_TRUE(c);
  const auto& row = m.constraint(*c);
  ASSERT_EQ(row.terms.size(), 1u);
  EXPECT_EQ(row.terms[0].var, y);
  EXPECT_EQ(row.terms[0].coef, -2.0);
  EXPECT_EQ(row.rhs, -4.0);
}

TEST(LpFormat, EmptyModelIsHeaderOnly) {
  EXPECT_EQ(to_lp_string(MipModel{}),
            "\\ Problem: blockbid\nMaximize\n obj:\nSubject To\nBounds\nEnd\n");
  EXPECT_EQ(parse_lp(to_lp_string(MipModel{})).num_vars(), 0u);
}

TEST(LpFormat, GoldenOneRow) { EXPECT_EQ(to_lp_string(one_row_model()), golden("one_row.lp")); }

TEST(MpsFormat, GoldenOneRow) { EXPECT_EQ(to_mps_string(one_row_model()), golden("one_row.mps")); }

TEST(MpsFormat, EmptyModelIsHeaderOnly) {
  const auto text = to_mps_string(MipModel{});
  EXPECT_EQ(text.find("COLUMNS\nRHS\nBOUNDS\nENDATA\n") != std::string::npos, true);
}

TEST(LpFormat, RoundTripAndDeterminism) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto m = mixed_model(seed);
    const auto a = to_lp_string(m);
    EXPECT_EQ(a, to_lp_string(mixed_model(seed)));
    const auto back = parse_lp(a);
    std::string why;
    EXPECT_TRUE(structurally_equal(m, back, &why)) << why;
    EXPECT_EQ(back.metadata(), m.metadata());
    EXPECT_EQ(to_lp_string(back), a);
  }
}

TEST(MpsFormat, RoundTripAndDeterminism) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto m = mixed_model(seed);
    const auto a = to_mps_string(m);
    EXPECT_EQ(a, to_mps_string(mixed_model(seed)));
    std::string why;
    EXPECT_TRUE(structurally_equal(m, parse_mps(a), &why)) << why;
  }
}

TEST(MpsFormat, LongNamesAreRenamedWithSidecar) {
  MipModel m;
  auto v = m.add_binary("a_rather_long_variable_name");
  m.add_constraint("another_long_row_name", LinExpr::var(v), Sense::LessEqual, 1.0);
  m.set_objective(LinExpr::var(v), true);
  NameMap names;
  const auto text = to_mps_string(m, &names);
  EXPECT_EQ(text.find("a_rather_long"), std::string::npos);
  EXPECT_EQ(names.variables.at("a_rather_long_variable_name"), "C0000001");
  std::ostringstream side;
  names.write(side);
  std::istringstream in(side.str());
  const NameMap back = NameMap::read(in);
  std::string why;
  EXPECT_TRUE(structurally_equal(m, parse_mps(text, &back), &why)) << why;
}

TEST(LpFormat, InvalidNamesAreRenamed) {
  MipModel m;
  auto v = m.add_binary("2bad name");
  m.set_objective(LinExpr::var(v), true);
  NameMap names;
  const auto text = to_lp_string(m, &names);
  EXPECT_EQ(text.find("2bad name"), std::string::npos);
  EXPECT_FALSE(names.empty());
}

TEST(LpFormat, WritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "blockbid_test_mip";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "m.lp").string();
  write_lp(one_row_model(), path);
  EXPECT_EQ(read_text_file(path), golden("one_row.lp"));
  std::string why;
  EXPECT_TRUE(structurally_equal(read_lp(path), one_row_model(), &why)) << why;
  std::filesystem::remove_all(dir);
}

TEST(LpFormat, ParseErrors) {
  EXPECT_THROW(parse_lp("Maximize\n obj: + 1 x\nSemi-continuous\n x\nEnd\n"), ParseError);
  EXPECT_THROW(read_lp("/nonexistent/file.lp"), Error);
}

TEST(Solution, ReadsValues) {
  MipModel m;
  m.add_continuous("x", 0, 1);
  const auto sol = parse_solution("x 1.0\n", m);
  EXPECT_EQ(sol.values.at("x"), 1.0);
  EXPECT_EQ(sol.x, (std::vector<double>{1.0}));
}

TEST(Solution, MissingDefaultsToZeroWithWarning) {
  MipModel m;
  m.add_continuous("x", 0, 1);
  m.add_continuous("y", 0, 1);
  std::vector<std::string> seen;
  auto old = set_warning_sink([&](const std::string& w) { seen.push_back(w); });
  const auto sol = parse_solution("x 0.25\n", m);
  set_warning_sink(old);
  EXPECT_EQ(sol.values.at("y"), 0.0);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_NE(seen[0].find("'y'"), std::string::npos);
}

TEST(Solution, Errors) {
  MipModel m;
  m.add_continuous("x", 0, 1);
  EXPECT_THROW(parse_solution("x 2.0\n", m), DomainError);
  EXPECT_THROW(parse_solution("x one\n", m), ParseError);
  EXPECT_THROW(parse_solution("x 1 2\n", m), ParseError);
  EXPECT_THROW(parse_solution("z 0\n", m), ParseError);
}

TEST(Solution, RoundTripsInternalOutput) {
  const auto m = mixed_model(4);
  std::vector<double> x;
  for (const auto& v : m.variables()) x.push_back(v.kind == VarKind::Binary ? 1.0 : v.lower / 3.0);
  const auto text = to_solution_string(m, x, m.objective_value(x), "optimal");
  const auto sol = parse_solution(text, m);
  EXPECT_EQ(sol.x, x);
  EXPECT_EQ(sol.status, "optimal");
  EXPECT_EQ(sol.objective, m.objective_value(x));
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -9.820137900379084, 1e-300, 123456789.0}) {
    EXPECT_EQ(*parse_number(format_number(v)), v);
  }
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(2.5), "2.5");
  EXPECT_FALSE(parse_number("abc"));
}
