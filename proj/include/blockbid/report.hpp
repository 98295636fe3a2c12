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


#pragma once

// Run artifacts (solution JSON, order book JSON/CSV, gap trace, report rows)
// and the brute/logical comparison table.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "blockbid/combinatorics.hpp"
#include "blockbid/mip/format.hpp"
#include "blockbid/mip/solution_io.hpp"
#include "blockbid/run.hpp"

namespace blockbid::report {

inline constexpr const char* kRunSchema = "blockbid-run/1";
inline constexpr const char* kTraceSchema = "blockbid-trace/1";
inline constexpr const char* kCompareSchema = "blockbid-compare/1";
inline constexpr const char* kSolutionSchema = "blockbid-solution/1";

// Directory name of a run under <scenario>/runs/.
inline std::string run_name(formulation::Kind kind, formulation::Variant variant) {
  std::string name = formulation::to_string(kind);
  if (variant == formulation::Variant::Profile) name += "-profile";
  return name;
}

// A JSON number, with non-finite values written as null.
inline nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline double num_or_nan(const nlohmann::json& j) {
  return j.is_number() ? j.get<double>() : std::nan("");
}

inline nlohmann::json config_json(const solver::SolverConfig& cfg) {
  return {{"mipGap", cfg.mipGap},       {"timeLimit", cfg.timeLimit}, {"bigM", cfg.bigM},
          {"tightenBigM", cfg.tightenBigM}, {"feasTol", cfg.feasTol}, {"intTol", cfg.intTol},
          {"seed", cfg.seed},           {"R", cfg.R},                 {"threads", cfg.threads},
          {"blockBonus", cfg.blockBonus}};
}

inline nlohmann::json solution_json(const Scenario& s, const RunOptions& opt, const RunResult& r) {
  const auto& sol = r.solution;
  nlohmann::json j;
  j["schema"] = kSolutionSchema;
  j["scenario"] = s.label;
  j["hours"] = s.hours();
  j["formulation"] = formulation::to_string(opt.kind);
  j["variant"] = formulation::to_string(opt.variant);
  j["status"] = solver::to_string(sol.status);
  j["objective"] = num(sol.objective);
  j["bestBound"] = num(sol.bestBound);
  j["gap"] = num(sol.gap);
  j["nodes"] = sol.nodes;
  j["lpIterations"] = sol.lpIterations;
  j["wallTime"] = sol.wallTime;
  j["binaries"] = r.binaries();
  j["chordErrorBound"] = r.formulation.chordErrorBound;
  j["config"] = config_json(opt.cfg);
  if (!sol.certificate.empty()) j["certificate"] = sol.certificate;
  if (r.has_incumbent()) {
    const auto& e = r.evaluation;
    j["marketObjective"] = e.marketObjective;
    j["profit"] = e.profit;
    j["flex"] = e.flex;
    j["flexHour"] = e.flexHour;
    j["flexBlock"] = e.flexBlock;
    j["paid"] = e.paid;
    j["orders"] = to_json(r.book);
  } else {
    j["orders"] = nlohmann::json::array();
  }
  return j;
}

// Compact order-book cell: "h<start>:<vol>" for hourly orders, "b<start>x<len>:<vol>"
// for regular blocks, "p<start>x<len>:<v1>/<v2>/..." for profile blocks; hours 1-based.
inline std::string book_cell(const OrderBook& book) {
  std::string out;
  for (const auto& o : book.orders) {
    if (!out.empty()) out += ';';
    const std::string start = std::to_string(o.start + 1);
    switch (o.kind) {
      case OrderKind::Hourly: out += "h" + start + ":" + mip::format_number(o.volume); break;
      case OrderKind::Block:
        out += "b" + start + "x" + std::to_string(o.duration) + ":" + mip::format_number(o.volume);
        break;
      case OrderKind::ProfileBlock: {
        out += "p" + start + "x" + std::to_string(o.duration) + ":";
        for (std::size_t k = 0; k < o.profile.size(); ++k) {
          if (k) out += '/';
          out += mip::format_number(o.profile[k]);
        }
        break;
      }
    }
  }
  return out;
}

inline const char* kReportHeader =
    "scenario,formulation,variant,status,objective,profit,bound,gap,wall_time_s,nodes,binaries,"
    "chord_error_bound,hourly_orders,block_orders,orders";

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string fmt(double v) { return std::isfinite(v) ? mip::format_number(v) : ""; }

inline std::string report_row(const Scenario& s, const RunOptions& opt, const RunResult& r) {
  const auto& sol = r.solution;
  std::ostringstream os;
  os << csv_field(s.label) << ',' << formulation::to_string(opt.kind) << ','
     << formulation::to_string(opt.variant) << ',' << solver::to_string(sol.status) << ','
     << fmt(sol.objective) << ',' << (r.has_incumbent() ? fmt(r.evaluation.profit) : "") << ','
     << fmt(sol.bestBound) << ',' << fmt(sol.gap) << ',' << fmt(sol.wallTime) << ',' << sol.nodes
     << ',' << r.binaries() << ',' << fmt(r.formulation.chordErrorBound) << ','
     << r.book.count(OrderKind::Hourly) << ','
     << r.book.count(OrderKind::Block) + r.book.count(OrderKind::ProfileBlock) << ','
     << csv_field(book_cell(r.book));
  return os.str();
}

// Appends one row; the schema line and header are written when the file is new.
inline void append_report(const std::string& path, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for appending");
  if (fresh) out << "# schema: " << kRunSchema << '\n' << kReportHeader << '\n';
  out << row << '\n';
}

inline std::string trace_csv(const solver::GapTrace& trace) {
  std::ostringstream os;
  os << "# schema: " << kTraceSchema << '\n' << "time_s,incumbent,bound,gap\n";
  for (const auto& s : trace.samples) {
    os << fmt(s.time) << ',' << fmt(s.incumbent) << ',' << fmt(s.bound) << ',' << fmt(s.gap) << '\n';
  }
  return os.str();
}

// Writes solution.json, solution.txt, orders.json, orders.csv, trace.csv and
// report.csv into `dir`.
inline void write_run(const std::string& dir, const Scenario& s, const RunOptions& opt,
                      const RunResult& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path d(dir);
  mip::write_text_file((d / "solution.json").string(), solution_json(s, opt, r).dump(2) + "\n");
  if (r.has_incumbent()) {
    mip::write_text_file((d / "solution.txt").string(),
                         mip::to_solution_string(r.formulation.model, r.solution.values,
                                                 r.solution.objective,
                                                 solver::to_string(r.solution.status)));
  }
  mip::write_text_file((d / "orders.json").string(), to_json(r.book).dump(2) + "\n");
  std::ostringstream csv;
  write_orders_csv(csv, r.book);
  mip::write_text_file((d / "orders.csv").string(), csv.str());
  mip::write_text_file((d / "trace.csv").string(), trace_csv(r.trace));
  const std::string report = (d / "report.csv").string();
  fs::remove(report);
  append_report(report, report_row(s, opt, r));
}

// ---------------------------------------------------------------------------
// Comparison

struct RunSummary {
  std::string status;
  double objective = std::nan("");
  double profit = std::nan("");
  double gap = std::nan("");
  double wallTime = 0.0;
  std::size_t nodes = 0;
  std::size_t binaries = 0;
  double chordErrorBound = 0.0;
  OrderBook book;
};

inline RunSummary read_run(const std::string& dir) {
  const auto j = nlohmann::json::parse(
      mip::read_text_file((std::filesystem::path(dir) / "solution.json").string()));
  if (j.value("schema", "") != kSolutionSchema) throw ParseError(dir + ": unknown solution schema");
  RunSummary r;
  r.status = j.at("status").get<std::string>();
  r.objective = num_or_nan(j.at("objective"));
  r.profit = j.contains("profit") ? num_or_nan(j.at("profit")) : std::nan("");
  r.gap = num_or_nan(j.at("gap"));
  r.wallTime = j.at("wallTime").get<double>();
  r.nodes = j.at("nodes").get<std::size_t>();
  r.binaries = j.at("binaries").get<std::size_t>();
  r.chordErrorBound = j.at("chordErrorBound").get<double>();
  r.book = order_book_from_json(j.at("orders"));
  return r;
}

struct ComparisonRow {
  std::string scenario;  // directory name
  std::string label;
  std::string cluster;
  RunSummary brute, logical;

  double delta() const { return logical.objective - brute.objective; }
  // Objectives agree within both gaps plus a relative 1e-6.
  bool agrees() const {
    const double scale = 1.0 + std::max(std::abs(brute.objective), std::abs(logical.objective));
    const double gaps = (std::isfinite(brute.gap) ? brute.gap : 0.0) * std::abs(brute.objective) +
                        (std::isfinite(logical.gap) ? logical.gap : 0.0) * std::abs(logical.objective);
    return std::abs(delta()) <= 1e-6 * scale + gaps;
  }
};

// One entry per scenario directory listed in <suite>/index.json, or every
// subdirectory holding meta.json when there is no index.
inline std::vector<std::pair<std::string, nlohmann::json>> suite_members(const std::string& suiteDir) {
  namespace fs = std::filesystem;
  std::vector<std::pair<std::string, nlohmann::json>> out;
  const fs::path index = fs::path(suiteDir) / "index.json";
  if (fs::exists(index)) {
    const auto j = nlohmann::json::parse(mip::read_text_file(index.string()));
    for (const auto& e : j.at("scenarios")) out.emplace_back(e.at("dir").get<std::string>(), e);
    return out;
  }
  if (!fs::is_directory(suiteDir)) throw Error("suite directory not found: " + suiteDir);
  for (const auto& entry : fs::directory_iterator(suiteDir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) {
      const auto meta = nlohmann::json::parse(mip::read_text_file((entry.path() / "meta.json").string()));
      out.emplace_back(entry.path().filename().string(), meta);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// Reads both formulations' runs for every scenario. Throws Error listing
// every missing run.
inline std::vector<ComparisonRow> collect_comparison(const std::string& suiteDir,
                                                     formulation::Variant variant = formulation::Variant::Regular) {
  namespace fs = std::filesystem;
  std::vector<ComparisonRow> rows;
  std::vector<std::string> missing;
  for (const auto& [dir, meta] : suite_members(suiteDir)) {
    ComparisonRow row;
    row.scenario = dir;
    row.label = meta.value("label", dir);
    row.cluster = meta.value("cluster", "");
    const fs::path runs = fs::path(suiteDir) / dir / "runs";
    const auto b = runs / run_name(formulation::Kind::Brute, formulation::Variant::Regular);
    const auto l = runs / run_name(formulation::Kind::Logical, variant);
    bool ok = true;
    for (const auto& p : {b, l}) {
      if (!fs::exists(p / "solution.json")) {
        missing.push_back((fs::path(dir) / "runs" / p.filename()).string());
        ok = false;
      }
    }
    if (!ok) continue;
    row.brute = read_run(b.string());
    row.logical = read_run(l.string());
    rows.push_back(std::move(row));
  }
  if (!missing.empty()) {
    std::string msg = "missing runs:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw Error(msg);
  }
  if (rows.empty()) throw Error("no scenarios found in " + suiteDir);
  return rows;
}

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "# schema: " << kCompareSchema << '\n';
  os << "scenario,label,cluster,objective_brute,objective_logical,delta,agree,same_orders,"
        "gap_brute,gap_logical,status_brute,status_logical,binaries_brute,binaries_logical,"
        "nodes_brute,nodes_logical,time_brute_s,time_logical_s,profit_brute,profit_logical\n";
  double tb = 0.0, tl = 0.0;
  std::size_t acceptable = 0;
  struct ProfitSum {
    double brute = 0.0, logical = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, ProfitSum> clusterProfit;
  for (const auto& r : rows) {
    const bool same = same_orders(canonicalize(r.brute.book), canonicalize(r.logical.book));
    os << csv_field(r.scenario) << ',' << csv_field(r.label) << ',' << csv_field(r.cluster) << ','
       << fmt(r.brute.objective) << ',' << fmt(r.logical.objective) << ',' << fmt(r.delta()) << ','
       << (r.agrees() ? 1 : 0) << ',' << (same ? 1 : 0) << ',' << fmt(r.brute.gap) << ','
       << fmt(r.logical.gap) << ',' << r.brute.status << ',' << r.logical.status << ','
       << r.brute.binaries << ',' << r.logical.binaries << ',' << r.brute.nodes << ','
       << r.logical.nodes << ',' << fmt(r.brute.wallTime) << ',' << fmt(r.logical.wallTime) << ','
       << fmt(r.brute.profit) << ',' << fmt(r.logical.profit) << '\n';
    const bool ok = r.brute.status != "timeLimit" && r.logical.status != "timeLimit";
    if (ok) {
      tb += r.brute.wallTime;
      tl += r.logical.wallTime;
      ++acceptable;
    }
    if (!r.cluster.empty() && std::isfinite(r.brute.profit) && std::isfinite(r.logical.profit)) {
      auto& c = clusterProfit[r.cluster];
      c.brute += r.brute.profit;
      c.logical += r.logical.profit;
      ++c.n;
    }
  }
  // Summary rows: mean times over runs where both formulations were acceptable,
  // then mean profit per cluster.
  if (acceptable > 0) {
    os << "summary,mean time over " << acceptable << " acceptable scenarios,,,,,,,,,,,,,,,"
       << fmt(tb / static_cast<double>(acceptable)) << ','
       << fmt(tl / static_cast<double>(acceptable)) << ",,\n";
  }
  for (const auto& [name, c] : clusterProfit) {
    const double n = static_cast<double>(c.n);
    os << "summary,mean profit " << csv_field(name) << ',' << csv_field(name)
       << ",,,,,,,,,,,,,,,," << fmt(c.brute / n) << ',' << fmt(c.logical / n) << '\n';
  }
  return os.str();
}

}  // namespace blockbid::report
