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


// blockbid: generate scenario suites, solve them with either formulation,
// compare the two, and cross-check small horizons against the oracle.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "blockbid/blockbid.hpp"

namespace fs = std::filesystem;
using namespace blockbid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitInfeasible = 4;

struct MissingInput : Error {
  using Error::Error;
};

void require_path(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) throw MissingInput(what + " not found: " + path);
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("BLOCKBID_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return seed;
  } catch (const std::exception&) {
    throw MissingInput(std::string("BLOCKBID_SEED is not an integer: ") + v);
  }
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string cluster_name(double fMax) {
  if (fMax == 20.0) return "Optimistic";
  if (fMax == 10.0) return "Realistic";
  if (fMax == 5.0) return "Pessimistic";
  return "fMax" + mip::format_number(fMax);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string config;
  std::string out;
  std::vector<std::string> seasons;
  std::size_t windowStart = 0;
  std::size_t windowLength = 24;
  std::size_t seededHours = 0;
  std::size_t count = 20;
  std::uint64_t firstSeed = 1;
};

int cmd_generate(const GenerateArgs& a) {
  nlohmann::json index;
  index["schema"] = "blockbid-suite/1";
  index["scenarios"] = nlohmann::json::array();
  fs::create_directories(a.out);

  if (a.seededHours > 0) {
    const std::uint64_t first = env_seed().value_or(a.firstSeed);
    for (std::uint64_t seed = first; seed < first + a.count; ++seed) {
      const auto s = scenarios::seeded_scenario(a.seededHours, seed);
      const std::string dir = "seeded_T" + std::to_string(a.seededHours) + "_s" + std::to_string(seed);
      nlohmann::json meta = {{"cluster", cluster_name(s.responsiveness.fMax)},
                             {"seed", seed},
                             {"synthetic", true}};
      scenarios::write_bundle((fs::path(a.out) / dir).string(), s, 0, meta);
      index["scenarios"].push_back({{"dir", dir}, {"label", s.label}, {"cluster", meta["cluster"]}});
    }
  } else {
    require_path(a.config, "suite config");
    auto cfg = scenarios::load_suite_config(a.config);
    if (auto seed = env_seed()) cfg.seed = *seed;
    if (!a.seasons.empty()) {
      std::vector<scenarios::Season> keep;
      std::vector<std::vector<std::string>> files;
      for (const auto& name : a.seasons) {
        const auto season = scenarios::season_from_string(name);
        const auto it = std::find(cfg.seasons.begin(), cfg.seasons.end(), season);
        if (it == cfg.seasons.end()) throw DomainError("season " + name + " is not in the config");
        keep.push_back(season);
        files.push_back(cfg.priceFiles[static_cast<std::size_t>(it - cfg.seasons.begin())]);
      }
      cfg.seasons = keep;
      cfg.priceFiles = files;
    }
    cfg.windowStart = a.windowStart;
    cfg.windowLength = a.windowLength;
    for (const auto& list : cfg.priceFiles) {
      for (const auto& p : list) require_path(p, "price file");
    }
    const auto suite = scenarios::build_suite(cfg);
    for (const auto& e : suite) {
      const std::string dir = lower(scenarios::to_string(e.season)) + std::to_string(e.variant) + "_" +
                              lower(e.cluster) + "_p" + std::to_string(e.priceIndex);
      const auto& files = cfg.priceFiles[static_cast<std::size_t>(
          std::find(cfg.seasons.begin(), cfg.seasons.end(), e.season) - cfg.seasons.begin())];
      const long long firstHour =
          scenarios::parse_prices(mip::read_text_file(files[e.priceIndex - 1])).firstHour +
          static_cast<long long>(cfg.windowStart);
      nlohmann::json meta = {{"season", scenarios::to_string(e.season)},
                             {"variant", e.variant},
                             {"cluster", e.cluster},
                             {"priceIndex", e.priceIndex},
                             {"breakpoints", cfg.breakpoints},
                             {"seed", cfg.seed},
                             {"synthetic", true}};
      scenarios::write_bundle((fs::path(a.out) / dir).string(), e.scenario, firstHour, meta);
      index["scenarios"].push_back({{"dir", dir}, {"label", e.scenario.label}, {"cluster", e.cluster}});
    }
  }
  mip::write_text_file((fs::path(a.out) / "index.json").string(), index.dump(2) + "\n");
  std::cout << "wrote " << index["scenarios"].size() << " scenarios to " << a.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string target;
  std::string formulation = "logical";
  std::string variant = "regular";
  double gap = 0.01;
  double timeLimit = 3600.0;
  std::size_t R = 4;
  double bigM = 40.0;
  bool emitLp = false;
  bool emitMps = false;
  std::string trace;
  std::string out;
  std::string report;
  bool epsilonBonus = false;
  std::size_t threads = 1;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
};

std::vector<double> meta_breakpoints(const std::string& dir) {
  const auto meta = nlohmann::json::parse(mip::read_text_file((fs::path(dir) / "meta.json").string()));
  if (!meta.contains("breakpoints")) return {};
  return meta.at("breakpoints").get<std::vector<double>>();
}

int exit_code(solver::SolveStatus s) {
  switch (s) {
    case solver::SolveStatus::TimeLimit: return kExitTimeLimit;
    case solver::SolveStatus::Infeasible: return kExitInfeasible;
    default: return kExitOk;
  }
}

int solve_one(const std::string& dir, const std::string& outDir, formulation::Kind kind,
              const SolveArgs& a, std::mutex& io) {
  const Scenario s = scenarios::read_bundle(dir);
  RunOptions opt;
  opt.kind = kind;
  opt.variant = formulation::variant_from_string(a.variant);
  opt.cfg.mipGap = a.gap;
  opt.cfg.timeLimit = a.timeLimit;
  opt.cfg.R = a.R;
  opt.cfg.bigM = a.bigM;
  opt.cfg.threads = a.threads;
  opt.cfg.blockBonus = a.epsilonBonus;
  opt.cfg.seed = a.seed.value_or(0);
  if (auto e = env_seed()) opt.cfg.seed = *e;
  opt.breakpoints = meta_breakpoints(dir);

  const std::string runDir =
      outDir.empty() ? (fs::path(dir) / "runs" / report::run_name(kind, opt.variant)).string() : outDir;
  fs::create_directories(runDir);
  RunResult r;
  r.curves = formulation::make_curves(s, opt.cfg.R, opt.breakpoints);
  r.formulation = build_model(s, r.curves, opt);
  if (a.emitLp) mip::write_lp(r.formulation.model, (fs::path(runDir) / "model.lp").string());
  if (a.emitMps) mip::write_mps(r.formulation.model, (fs::path(runDir) / "model.mps").string());
  std::tie(r.solution, r.trace) = solver::solve(r.formulation.model, opt.cfg);
  if (r.has_incumbent()) {
    r.evaluation = formulation::evaluate(r.formulation, s, r.solution.values);
    r.book = canonicalize(formulation::decode(r.formulation, r.solution.values));
  }
  report::write_run(runDir, s, opt, r);
  if (!a.trace.empty()) mip::write_text_file(a.trace, report::trace_csv(r.trace));
  {
    std::lock_guard lock(io);
    if (!a.report.empty()) report::append_report(a.report, report::report_row(s, opt, r));
    std::cout << s.label << "  " << formulation::to_string(kind) << "  "
              << solver::to_string(r.solution.status) << "  objective "
              << report::fmt(r.solution.objective) << "  gap " << report::fmt(r.solution.gap)
              << "  " << report::fmt(r.solution.wallTime) << " s  orders " << r.book.size();
    if (r.solution.status == solver::SolveStatus::Infeasible) {
      std::cout << "  infeasible at " << r.solution.certificate;
    }
    std::cout << '\n';
  }
  return exit_code(r.solution.status);
}

int cmd_solve(const SolveArgs& a) {
  require_path(a.target, "scenario directory");
  std::vector<formulation::Kind> kinds;
  if (a.formulation == "both") {
    kinds = {formulation::Kind::Brute, formulation::Kind::Logical};
  } else {
    kinds = {formulation::kind_from_string(a.formulation)};
  }
  std::vector<std::string> dirs;
  const bool single = fs::exists(fs::path(a.target) / "meta.json");
  if (single) {
    dirs.push_back(a.target);
  } else {
    for (const auto& [d, meta] : report::suite_members(a.target)) dirs.push_back((fs::path(a.target) / d).string());
    if (dirs.empty()) throw MissingInput("no scenarios found in " + a.target);
    if (!a.out.empty()) throw MissingInput("--out applies to a single scenario only");
  }
  if (!a.out.empty() && kinds.size() > 1) throw MissingInput("--out needs a single formulation");
  if (a.variant == "profile" && a.formulation != "logical") {
    throw MissingInput("--variant profile needs --formulation logical");
  }

  struct Job {
    std::string dir;
    formulation::Kind kind;
  };
  std::vector<Job> jobs;
  for (const auto& d : dirs) {
    for (auto k : kinds) jobs.push_back({d, k});
  }
  std::vector<int> codes(jobs.size(), kExitOk);
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        codes[i] = solve_one(jobs[i].dir, a.out, jobs[i].kind, a, io);
      } catch (const std::exception& e) {
        codes[i] = kExitError;
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(a.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) std::cerr << "error: " << jobs[i].dir << ": " << errors[i] << '\n';
    // Severity: error > infeasible > time limit > ok.
    auto rank = [](int c) { return c == kExitError ? 3 : c == kExitInfeasible ? 2 : c == kExitTimeLimit ? 1 : 0; };
    if (rank(codes[i]) > rank(code)) code = codes[i];
  }
  return code;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const std::string& suite, const std::string& out, const std::string& variant) {
  require_path(suite, "suite directory");
  std::vector<report::ComparisonRow> rows;
  try {
    rows = report::collect_comparison(suite, formulation::variant_from_string(variant));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw MissingInput(e.what());
  }
  const std::string csv = report::comparison_csv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    if (const auto parent = fs::path(out).parent_path(); !parent.empty()) fs::create_directories(parent);
    mip::write_text_file(out, csv);
  }
  std::size_t agree = 0, same = 0;
  for (const auto& r : rows) {
    agree += r.agrees();
    same += same_orders(canonicalize(r.brute.book), canonicalize(r.logical.book));
  }
  std::cerr << rows.size() << " scenarios, " << agree << " with agreeing objectives, " << same
            << " with identical order books\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& dir, std::size_t R, double gap) {
  require_path(fs::path(dir) / "meta.json", "scenario bundle");
  const Scenario s = scenarios::read_bundle(dir);
  RunOptions opt;
  opt.cfg.R = R;
  opt.cfg.mipGap = gap;
  opt.breakpoints = meta_breakpoints(dir);
  const auto curves = formulation::make_curves(s, R, opt.breakpoints);
  const auto orc = oracle::oracle_solve(s, curves.pwl, curves.cost,
                                        oracle::enumerate_structures(s.hours()));
  const double tol = 1e-5 * (1.0 + std::abs(orc.objective));
  std::cout << s.label << '\n';
  std::cout << "oracle   objective " << mip::format_number(orc.objective) << "  bound "
            << mip::format_number(orc.bound) << "  structures " << orc.structures << " (solved "
            << orc.solved << ", pruned " << orc.pruned << ")\n";
  bool ok = true;
  for (auto k : {formulation::Kind::Brute, formulation::Kind::Logical}) {
    opt.kind = k;
    const auto r = run_scenario(s, opt);
    const bool pass = r.has_incumbent() && r.solution.objective >= orc.objective - tol - gap * std::abs(orc.objective) &&
                      r.solution.objective <= orc.bound + tol;
    ok = ok && pass;
    std::cout << formulation::to_string(k) << (k == formulation::Kind::Brute ? "    " : "  ")
              << "objective " << report::fmt(r.solution.objective) << "  "
              << (pass ? "agrees" : "DISAGREES") << '\n';
  }
  return ok ? kExitOk : kExitError;
}

// ---------------------------------------------------------------------------
// decode: ingest a solution file written by an external solver

int cmd_decode(const std::string& dir, const std::string& solutionPath, const std::string& namesPath,
               const std::string& kindName, const std::string& variant, std::size_t R,
               const std::string& out) {
  require_path(fs::path(dir) / "meta.json", "scenario bundle");
  require_path(solutionPath, "solution file");
  const Scenario s = scenarios::read_bundle(dir);
  RunOptions opt;
  opt.kind = formulation::kind_from_string(kindName);
  opt.variant = formulation::variant_from_string(variant);
  opt.cfg.R = R;
  opt.breakpoints = meta_breakpoints(dir);
  RunResult r;
  r.curves = formulation::make_curves(s, R, opt.breakpoints);
  r.formulation = build_model(s, r.curves, opt);
  std::optional<mip::NameMap> names;
  if (!namesPath.empty()) {
    require_path(namesPath, "name map");
    std::ifstream in(namesPath);
    names = mip::NameMap::read(in);
  }
  const auto file = mip::read_solution(solutionPath, r.formulation.model, opt.cfg.feasTol,
                                       names ? &*names : nullptr);
  if (auto bad = mip::first_violation(r.formulation.model, file.x, opt.cfg.feasTol)) {
    throw DomainError("imported solution violates '" + *bad + "'");
  }
  r.solution.values = file.x;
  r.solution.objective = r.formulation.model.objective_value(file.x);
  // The external solver's bound is unknown.
  r.solution.status = solver::SolveStatus::Optimal;
  r.solution.gap = std::nan("");
  r.solution.bestBound = std::nan("");
  r.evaluation = formulation::evaluate(r.formulation, s, file.x);
  r.book = canonicalize(formulation::decode(r.formulation, file.x));
  const std::string runDir =
      out.empty() ? (fs::path(dir) / "runs" / (report::run_name(opt.kind, opt.variant) + "-imported")).string() : out;
  report::write_run(runDir, s, opt, r);
  std::cout << s.label << "  imported objective " << report::fmt(r.solution.objective) << "  orders "
            << r.book.size() << "  -> " << runDir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-order bidding for day-ahead markets"};
  app.require_subcommand(1);

  GenerateArgs gen;
#ifdef BLOCKBID_DATA_DIR
  gen.config = std::string(BLOCKBID_DATA_DIR) + "/suite.json";
#endif
  auto* g = app.add_subcommand("generate", "Write a scenario suite to disk");
  g->add_option("--config", gen.config, "Suite config JSON")->capture_default_str();
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--seasons", gen.seasons, "Keep only these seasons")->delimiter(',');
  g->add_option("--window-start", gen.windowStart, "First hour of the horizon window (0-based)");
  g->add_option("--window-length", gen.windowLength, "Hours in the horizon window");
  g->add_option("--seeded", gen.seededHours, "Write seeded random-window scenarios of this many hours instead");
  g->add_option("--count", gen.count, "Number of seeded scenarios")->capture_default_str();
  g->add_option("--seed", gen.firstSeed, "First seed of the seeded scenarios")->capture_default_str();

  SolveArgs sv;
  auto* s = app.add_subcommand("solve", "Solve a scenario bundle or every scenario in a suite");
  s->add_option("target", sv.target, "Scenario or suite directory")->required();
  s->add_option("--formulation", sv.formulation, "brute, logical or both")
      ->check(CLI::IsMember({"brute", "logical", "both"}))
      ->capture_default_str();
  s->add_option("--variant", sv.variant, "regular or profile")
      ->check(CLI::IsMember({"regular", "profile"}))
      ->capture_default_str();
  s->add_option("--gap", sv.gap, "Relative MIP gap")->capture_default_str();
  s->add_option("--time-limit", sv.timeLimit, "Wall-clock limit per run, seconds")->capture_default_str();
  s->add_option("--R", sv.R, "Cost-curve sub-segments per responsiveness piece")->capture_default_str();
  s->add_option("--big-m", sv.bigM, "Big-M constant, MWh")->capture_default_str();
  s->add_flag("--emit-lp", sv.emitLp, "Also write model.lp");
  s->add_flag("--emit-mps", sv.emitMps, "Also write model.mps");
  s->add_option("--trace", sv.trace, "Copy the gap trace CSV to this path");
  s->add_option("--out", sv.out, "Run directory (default <scenario>/runs/<formulation>)");
  s->add_option("--report", sv.report, "Append one report row per run to this CSV");
  s->add_flag("--epsilon-bonus", sv.epsilonBonus, "Break hourly/block ties towards blocks");
  s->add_option("--threads", sv.threads, "Branch-and-bound worker threads per run")->capture_default_str();
  s->add_option("--jobs", sv.jobs, "Runs solved in parallel")->capture_default_str();
  s->add_option("--seed", sv.seed, "Solver seed (BLOCKBID_SEED overrides)");

  std::string cmpSuite, cmpOut, cmpVariant = "regular";
  auto* c = app.add_subcommand("compare", "Tabulate brute against logical runs of a suite");
  c->add_option("suite", cmpSuite, "Suite directory")->required();
  c->add_option("--out", cmpOut, "Output CSV (default stdout)");
  c->add_option("--variant", cmpVariant, "Variant of the logical runs")
      ->check(CLI::IsMember({"regular", "profile"}))
      ->capture_default_str();

  std::string verDir;
  std::size_t verR = 4;
  double verGap = 1e-6;
  auto* v = app.add_subcommand("verify", "Check both formulations against the exhaustive oracle (T <= 12)");
  v->add_option("scenario", verDir, "Scenario directory")->required();
  v->add_option("--R", verR, "Cost-curve sub-segments per piece")->capture_default_str();
  v->add_option("--gap", verGap, "Relative MIP gap of the formulation runs")->capture_default_str();

  std::string decDir, decSolution, decNames, decKind = "logical", decVariant = "regular", decOut;
  std::size_t decR = 4;
  auto* d = app.add_subcommand("decode", "Read an external solver's solution file into run artifacts");
  d->add_option("scenario", decDir, "Scenario directory")->required();
  d->add_option("--solution", decSolution, "Solution file, 'name value' per line")->required();
  d->add_option("--names", decNames, "Name map written next to a renamed LP/MPS file");
  d->add_option("--formulation", decKind, "brute or logical")
      ->check(CLI::IsMember({"brute", "logical"}))
      ->capture_default_str();
  d->add_option("--variant", decVariant, "regular or profile")
      ->check(CLI::IsMember({"regular", "profile"}))
      ->capture_default_str();
  d->add_option("--R", decR, "Cost-curve sub-segments per piece")->capture_default_str();
  d->add_option("--out", decOut, "Run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(sv);
    if (c->parsed()) return cmd_compare(cmpSuite, cmpOut, cmpVariant);
    if (v->parsed()) return cmd_verify(verDir, verR, verGap);
    if (d->parsed()) return cmd_decode(decDir, decSolution, decNames, decKind, decVariant, decR, decOut);
  } catch (const MissingInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
