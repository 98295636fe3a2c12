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

// Best-first branch-and-bound over the dual simplex.
//
// Each worker owns one LP and moves it from node to node by changing binary
// bounds; the basis carries over, so a node usually needs only a handful of
// dual pivots. Nodes are taken best-bound first (ties: lower node id). Every
// 8 nodes, and until the first incumbent exists, the worker plunges: it keeps
// the child matching the rounded LP value and goes straight to it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "blockbid/errors.hpp"
#include "blockbid/log.hpp"
#include "blockbid/mip/model.hpp"
#include "blockbid/solver/config.hpp"
#include "blockbid/solver/dual_simplex.hpp"

namespace blockbid::solver {

enum class SolveStatus { Optimal, GapReached, TimeLimit, Infeasible, Cutoff };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapReached: return "gapReached";
    case SolveStatus::TimeLimit: return "timeLimit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Cutoff: return "cutoff";
  }
  return "?";
}

struct Solution {
  std::vector<double> values;
  double objective = -std::numeric_limits<double>::infinity();
  double bestBound = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::Infeasible;
  std::size_t nodes = 0;
  double wallTime = 0.0;
  std::size_t lpIterations = 0;
  // Name of the row or variable that proved infeasibility.
  std::string certificate;

  bool has_incumbent() const { return !values.empty(); }
};

struct GapSample {
  double time = 0.0;
  double incumbent = 0.0;
  double bound = 0.0;
  double gap = 0.0;
};

struct GapTrace {
  std::vector<GapSample> samples;

  // Incumbent nondecreasing, bound nonincreasing, gap nonincreasing.
  bool monotone() const {
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const auto& a = samples[i - 1];
      const auto& b = samples[i];
      if (b.incumbent < a.incumbent || b.bound > a.bound || b.gap > a.gap || b.time < a.time) {
        return false;
      }
    }
    return true;
  }
};

// Relative gap for a maximization problem.
inline double relative_gap(double bound, double incumbent) {
  if (!std::isfinite(incumbent)) return std::numeric_limits<double>::infinity();
  if (!std::isfinite(bound)) return bound > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::max(0.0, bound - incumbent) / std::max(std::abs(bound), 1e-9);
}

struct SolveOptions {
  // Only solutions strictly better than this objective are of interest;
  // nodes that cannot beat it are pruned. Status Cutoff means none exists.
  std::optional<double> cutoff;
};

namespace detail {

struct Node {
  std::uint64_t id = 0;
  double bound = -std::numeric_limits<double>::infinity();  // min form
  std::vector<std::pair<std::uint32_t, std::uint8_t>> fixings;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id < b.id;
  }
};

inline std::string var_or_row_name(const mip::MipModel& m, std::size_t j) {
  if (j < m.num_vars()) return m.var(j).name;
  return m.constraint(j - m.num_vars()).name;
}

class BranchAndBound {
 public:
  BranchAndBound(const mip::MipModel& model, const SolverConfig& cfg, const SolveOptions& opt)
      : model_(model), cfg_(cfg), lp_(make_lp(model)) {
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
      if (model.var(j).kind == mip::VarKind::Binary) binaries_.push_back(j);
    }
    if (opt.cutoff) {
      cutoffMin_ = (*opt.cutoff - lp_.objConstant) / lp_.objSign;
      hasCutoff_ = true;
    }
  }

  std::pair<Solution, GapTrace> run() {
    start_ = Clock::now();
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(cfg_.timeLimit));
    open_.insert(Node{nextId_++, -std::numeric_limits<double>::infinity(), {}});
    record_sample_locked();
    const std::size_t threads = std::max<std::size_t>(1, cfg_.threads);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t i = 0; i < threads; ++i) pool.emplace_back([this] { worker(); });
    }
    return finish();
  }

 private:
  double incumbent_min() const {
    if (!incumbent_.empty()) return incumbentMin_;
    if (hasCutoff_) return cutoffMin_;
    return std::numeric_limits<double>::infinity();
  }
  static double prune_tol(double v) { return 1e-9 * (1.0 + std::abs(v)); }
  // True when min-form value z can still beat the incumbent level inc.
  static bool improves(double z, double inc) {
    return !std::isfinite(inc) || z < inc - prune_tol(inc);
  }

  double to_orig(double zMin) const { return lp_.objSign * zMin + lp_.objConstant; }

  // Lowest min-form bound among unfinished nodes.
  double open_bound_locked() const {
    double lb = lostBound_;
    if (!open_.empty()) lb = std::min(lb, open_.begin()->bound);
    if (!inFlight_.empty()) lb = std::min(lb, *inFlight_.begin());
    return lb;
  }

  bool tree_empty_locked() const { return open_.empty() && inFlight_.empty(); }

  // Maximization-sense incumbent and bound for the trace.
  std::pair<double, double> max_sense_locked() const {
    const double sign = model_.objective().maximize ? 1.0 : -1.0;
    const double inc = incumbent_.empty() ? -std::numeric_limits<double>::infinity()
                                          : sign * to_orig(incumbentMin_);
    const double lb = std::min(open_bound_locked(), incumbent_min());
    double bound = std::isfinite(lb) ? sign * to_orig(lb)
                                     : (lb > 0 ? -std::numeric_limits<double>::infinity()
                                               : std::numeric_limits<double>::infinity());
    if (!incumbent_.empty()) bound = std::max(bound, inc);
    return {inc, bound};
  }

  void record_sample_locked() {
    auto [inc, bound] = max_sense_locked();
    bound = std::min(bound, reportedBound_);
    reportedBound_ = bound;
    const double gap = std::min(relative_gap(bound, inc), reportedGap_);
    reportedGap_ = gap;
    auto& s = trace_.samples;
    if (!s.empty() && s.back().incumbent == inc && s.back().bound == bound && s.back().gap == gap) {
      return;
    }
    const double t = std::chrono::duration<double>(Clock::now() - start_).count();
    s.push_back({s.empty() ? t : std::max(t, s.back().time), inc, bound, gap});
  }

  void worker() {
    DualSimplex lp(lp_);
    std::vector<std::uint32_t> applied;
    bool plunging = true;
    std::optional<Node> dive;
    std::multiset<double>::iterator diveFlight;
    std::unique_lock lock(mu_);
    for (;;) {
      if (stop_) break;
      Node node;
      std::multiset<double>::iterator flight;
      bool tracked = false;
      if (dive) {
        node = std::move(*dive);
        dive.reset();
        flight = diveFlight;
        tracked = true;
      } else if (!open_.empty()) {
        node = open_.extract(open_.begin()).value();
      } else if (inFlight_.empty()) {
        stop_ = true;
        break;
      } else {
        cv_.wait(lock);
        continue;
      }
      if (Clock::now() >= deadline_) {
        if (tracked) inFlight_.erase(flight);
        open_.insert(std::move(node));
        finalStatus_ = SolveStatus::TimeLimit;
        stop_ = true;
        break;
      }
      const double incMin = incumbent_min();
      if (!improves(node.bound, incMin)) {
        if (tracked) inFlight_.erase(flight);
        plunging = false;
        record_sample_locked();
        cv_.notify_all();
        continue;
      }
      if (!tracked) flight = inFlight_.insert(node.bound);
      const bool startPlunge = (++processed_ % 8) == 0;
      lock.unlock();

      // Move the LP to this node's bounds.
      for (auto j : applied) lp.set_bounds(j, lp_.lower[j], lp_.upper[j]);
      applied.clear();
      for (auto [j, v] : node.fixings) {
        lp.set_bounds(j, v, v);
        applied.push_back(j);
      }
      const double lpCutoff = std::isfinite(incMin) ? incMin - prune_tol(incMin)
                                                    : std::numeric_limits<double>::infinity();
      const LpResult res = lp.solve(deadline_, lpCutoff);

      std::optional<std::size_t> branchVar;
      double branchValue = 0.0;
      std::optional<std::vector<double>> candidate;
      double candidateMin = 0.0;
      if (res.status == LpStatus::Optimal && improves(res.value, incMin)) {
        const std::vector<double> x = lp.primal();
        double bestFrac = cfg_.intTol;
        int bestPriority = std::numeric_limits<int>::min();
        for (std::size_t j : binaries_) {
          const double f = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
          if (f <= cfg_.intTol + 1e-12) continue;
          const int pr = model_.branch_priority(j);
          if (pr > bestPriority || (pr == bestPriority && f > bestFrac + 1e-12)) {
            bestPriority = pr;
            bestFrac = f;
            branchVar = j;
            branchValue = x[j];
          }
        }
        if (!branchVar) {
          // Integral: fix the rounded binaries and re-solve to clean up.
          for (std::size_t j : binaries_) {
            const double v = std::round(x[j]);
            lp.set_bounds(j, v, v);
            applied.push_back(static_cast<std::uint32_t>(j));
          }
          const LpResult pol = lp.solve(deadline_);
          if (pol.status == LpStatus::Optimal) {
            auto xp = lp.primal();
            for (std::size_t j = 0; j < xp.size(); ++j) {
              xp[j] = std::clamp(xp[j], lp_.lower[j], lp_.upper[j]);
            }
            for (std::size_t j : binaries_) xp[j] = std::round(xp[j]);
            if (auto bad = mip::first_violation(model_, xp, cfg_.feasTol)) {
              warn("discarding integral LP point: " + *bad);
            } else {
              for (std::size_t j = 0; j < xp.size(); ++j) candidateMin += lp_.cost[j] * xp[j];
              candidate = std::move(xp);
            }
          }
        }
      }

      lock.lock();
      inFlight_.erase(flight);
      ++nodes_;
      lpIterations_ += res.iterations;
      switch (res.status) {
        case LpStatus::Infeasible:
          if (certificate_.empty() && res.infeasibleVar) {
            certificate_ = var_or_row_name(model_, *res.infeasibleVar);
          }
          break;
        case LpStatus::TimeLimit:
          open_.insert(std::move(node));
          finalStatus_ = SolveStatus::TimeLimit;
          stop_ = true;
          break;
        case LpStatus::IterationLimit:
          warn("LP iteration limit at node " + std::to_string(node.id) + "; keeping its bound");
          lostBound_ = std::min(lostBound_, node.bound);
          break;
        default:
          break;
      }
      if (candidate && improves(candidateMin, incumbent_min())) {
        incumbentMin_ = candidateMin;
        incumbent_ = std::move(*candidate);
      }
      if (!stop_ && branchVar && improves(res.value, incumbent_min())) {
        Node down{nextId_++, res.value, node.fixings};
        Node up{nextId_++, res.value, node.fixings};
        down.fixings.emplace_back(static_cast<std::uint32_t>(*branchVar), 0);
        up.fixings.emplace_back(static_cast<std::uint32_t>(*branchVar), 1);
        if (plunging || startPlunge || incumbent_.empty()) {
          plunging = true;
          const bool preferUp = branchValue >= 0.5;
          open_.insert(preferUp ? std::move(down) : std::move(up));
          dive = preferUp ? std::move(up) : std::move(down);
          diveFlight = inFlight_.insert(dive->bound);
        } else {
          open_.insert(std::move(down));
          open_.insert(std::move(up));
        }
      } else {
        plunging = false;
      }
      record_sample_locked();
      if (!stop_ && !incumbent_.empty() && !tree_empty_locked() &&
          reportedGap_ <= cfg_.mipGap) {
        finalStatus_ = SolveStatus::GapReached;
        stop_ = true;
      }
      cv_.notify_all();
    }
    if (dive) {
      inFlight_.erase(diveFlight);
      open_.insert(std::move(*dive));
    }
    cv_.notify_all();
  }

  std::pair<Solution, GapTrace> finish() {
    std::lock_guard lock(mu_);
    Solution sol;
    sol.nodes = nodes_;
    sol.lpIterations = lpIterations_;
    record_sample_locked();
    auto [inc, bound] = max_sense_locked();
    bound = std::min(bound, reportedBound_);
    const double sign = model_.objective().maximize ? 1.0 : -1.0;
    if (!incumbent_.empty()) {
      sol.values = incumbent_;
      sol.objective = model_.objective_value(incumbent_);
      sol.bestBound = sign * bound;
      sol.gap = relative_gap(bound, inc);
    } else {
      sol.bestBound = sign * bound;
    }
    if (finalStatus_) {
      sol.status = *finalStatus_;
    } else if (!incumbent_.empty()) {
      sol.status = SolveStatus::Optimal;
      sol.bestBound = sol.objective;
      sol.gap = 0.0;
    } else {
      sol.status = hasCutoff_ ? SolveStatus::Cutoff : SolveStatus::Infeasible;
    }
    if (sol.status == SolveStatus::Infeasible) {
      sol.certificate = certificate_.empty() ? "integrality" : certificate_;
    }
    sol.wallTime = std::chrono::duration<double>(Clock::now() - start_).count();
    return {std::move(sol), std::move(trace_)};
  }

  const mip::MipModel& model_;
  SolverConfig cfg_;
  LpData lp_;
  std::vector<std::size_t> binaries_;
  bool hasCutoff_ = false;
  double cutoffMin_ = std::numeric_limits<double>::infinity();

  std::mutex mu_;
  std::condition_variable cv_;
  std::set<Node, NodeOrder> open_;
  std::multiset<double> inFlight_;
  double lostBound_ = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent_;
  double incumbentMin_ = std::numeric_limits<double>::infinity();
  std::uint64_t nextId_ = 0;
  std::uint64_t processed_ = 0;
  std::size_t nodes_ = 0;
  std::size_t lpIterations_ = 0;
  bool stop_ = false;
  std::optional<SolveStatus> finalStatus_;
  std::string certificate_;
  GapTrace trace_;
  double reportedBound_ = std::numeric_limits<double>::infinity();
  double reportedGap_ = std::numeric_limits<double>::infinity();
  Clock::time_point start_;
  Clock::time_point deadline_;
};

}  // namespace detail

inline std::pair<Solution, GapTrace> solve(const mip::MipModel& model, const SolverConfig& cfg,
                                           const SolveOptions& opt = {}) {
  if (auto rep = model.validate(); !rep.ok()) throw DomainError("invalid model: " + rep.str());
  if (!(cfg.mipGap > 0.0)) throw DomainError("mipGap must be > 0");
  if (!(cfg.timeLimit > 0.0)) throw DomainError("timeLimit must be > 0");
  detail::BranchAndBound bb(model, cfg, opt);
  return bb.run();
}

struct Relaxation {
  double value = 0.0;
  std::vector<double> values;
};

// Continuous relaxation. Throws DomainError naming the proving row when the
// relaxation is infeasible.
inline Relaxation relax(const mip::MipModel& model) {
  DualSimplex lp(make_lp(model));
  const LpResult res = lp.solve();
  if (res.status == LpStatus::Infeasible) {
    throw DomainError("LP relaxation infeasible at '" +
                      detail::var_or_row_name(model, res.infeasibleVar.value_or(0)) + "'");
  }
  if (res.status != LpStatus::Optimal) throw Error(std::string("LP relaxation ") + to_string(res.status));
  return {lp.objective(), lp.primal()};
}

inline double lp_relax(const mip::MipModel& model) { return relax(model).value; }

}  // namespace blockbid::solver
