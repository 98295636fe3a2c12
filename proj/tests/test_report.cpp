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
#include <sstream>

#include "blockbid/report.hpp"
#include "blockbid/scenarios.hpp"

namespace fs = std::filesystem;
using namespace blockbid;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("blockbid_report_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t fields(const std::string& line) {
  std::size_t n = 1;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) ++n;
  }
  return n;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RunOptions options(formulation::Kind kind) {
  RunOptions opt;
  opt.kind = kind;
  opt.cfg.mipGap = 1e-6;
  opt.cfg.R = 2;
  return opt;
}

}  // namespace

TEST(Report, BookCell) {
  OrderBook book;
  book.orders.push_back({OrderKind::Hourly, 0, 1, -2.5, {}});
  book.orders.push_back({OrderKind::Block, 3, 4, -1.0, {}});
  book.orders.push_back({OrderKind::ProfileBlock, 8, 2, 0.0, {-1.0, -0.5}});
  EXPECT_EQ(report::book_cell(book), "h1:-2.5;b4x4:-1;p9x2:-1/-0.5");
  EXPECT_EQ(report::book_cell({}), "");
}

TEST(Report, CsvFieldQuoting) {
  EXPECT_EQ(report::csv_field("plain"), "plain");
  EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Report, RunNames) {
  using formulation::Kind;
  using formulation::Variant;
  EXPECT_EQ(report::run_name(Kind::Brute, Variant::Regular), "brute");
  EXPECT_EQ(report::run_name(Kind::Logical, Variant::Regular), "logical");
  EXPECT_EQ(report::run_name(Kind::Logical, Variant::Profile), "logical-profile");
}

TEST(Report, WriteAndReadRun) {
  const auto dir = scratch("run");
  const Scenario s = scenarios::flat_scenario(6, 30.0, -4.0, -6.0);
  const auto opt = options(formulation::Kind::Logical);
  const auto r = run_scenario(s, opt);
  report::write_run(dir.string(), s, opt, r);
  for (const char* f : {"solution.json", "solution.txt", "orders.json", "orders.csv", "trace.csv", "report.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto back = report::read_run(dir.string());
  EXPECT_EQ(back.status, solver::to_string(r.solution.status));
  EXPECT_DOUBLE_EQ(back.objective, r.solution.objective);
  EXPECT_EQ(back.binaries, r.binaries());
  EXPECT_TRUE(same_orders(back.book, r.book));

  const auto report = lines(mip::read_text_file((dir / "report.csv").string()));
  ASSERT_EQ(report.size(), 3u);
  EXPECT_EQ(report[0], std::string("# schema: ") + report::kRunSchema);
  EXPECT_EQ(fields(report[1]), fields(report[2]));

  const auto trace = lines(mip::read_text_file((dir / "trace.csv").string()));
  ASSERT_GE(trace.size(), 3u);
  EXPECT_EQ(trace[1], "time_s,incumbent,bound,gap");
}

TEST(Report, AppendKeepsOneHeader) {
  const auto dir = scratch("append");
  const auto path = (dir / "r.csv").string();
  report::append_report(path, "a");
  report::append_report(path, "b");
  EXPECT_EQ(lines(mip::read_text_file(path)).size(), 4u);
}

TEST(Report, ComparisonOverSuite) {
  const auto dir = scratch("suite");
  for (std::uint64_t seed : {1, 2}) {
    const Scenario s = scenarios::seeded_scenario(6, seed);
    const auto sub = dir / ("s" + std::to_string(seed));
    scenarios::write_bundle(sub.string(), s, 0, {{"cluster", seed == 1 ? "A" : "B"}});
    for (auto kind : {formulation::Kind::Brute, formulation::Kind::Logical}) {
      const auto opt = options(kind);
      report::write_run((sub / "runs" / report::run_name(kind, opt.variant)).string(), s, opt,
                        run_scenario(s, opt));
    }
  }
  const auto rows = report::collect_comparison(dir.string(), formulation::Variant::Regular);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_TRUE(r.agrees()) << r.scenario;
  EXPECT_EQ(rows[0].cluster, "A");

  const auto csv = lines(report::comparison_csv(rows));
  EXPECT_EQ(csv[0], std::string("# schema: ") + report::kCompareSchema);
  for (std::size_t i = 1; i < csv.size(); ++i) EXPECT_EQ(fields(csv[i]), 20u) << csv[i];
  // header, two scenarios, mean time, one profit row per cluster
  EXPECT_EQ(csv.size(), 1u + 1u + 2u + 1u + 2u);

  fs::remove_all(dir / "s2" / "runs" / "brute");
  try {
    report::collect_comparison(dir.string(), formulation::Variant::Regular);
    FAIL() << "expected a missing-run error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("s2"), std::string::npos) << e.what();
  }
}

TEST(Report, EmptySuiteIsAnError) {
  const auto dir = scratch("empty");
  EXPECT_THROW(report::collect_comparison(dir.string(), formulation::Variant::Regular), Error);
}
