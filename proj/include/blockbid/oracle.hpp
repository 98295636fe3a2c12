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

// Exhaustive reference solver for short horizons. Every legal order
// structure (per hour: idle, hourly, or member of a block of >= 3 hours) is
// fixed in turn and only volumes and paid prices are optimized. Structures
// are visited in order of their LP bound and skipped once the bound cannot
// beat the best objective found.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "blockbid/combinatorics.hpp"
#include "blockbid/core.hpp"
#include "blockbid/formulation/shared.hpp"
#include "blockbid/solver/branch_and_bound.hpp"

namespace blockbid::oracle {

inline constexpr std::size_t kMaxOracleHours = 12;

enum class HourState : char { Idle = '.', Hourly = 'h', BlockStart = 'B', BlockMember = 'b' };

struct OrderStructure {
  std::vector<HourState> hours;

  std::string encoding() const {
    std::string s;
    for (HourState h : hours) s.push_back(static_cast<char>(h));
    return s;
  }
  // Block segments as runs.
  std::vector<Run> blocks() const {
    std::vector<Run> out;
    for (std::size_t t = 0; t < hours.size(); ++t) {
      if (hours[t] == HourState::BlockStart) out.push_back({t, 1});
      else if (hours[t] == HourState::BlockMember) ++out.back().length;
    }
    return out;
  }
};

inline void check_horizon(std::size_t T) {
  if (T > kMaxOracleHours) {
    throw DomainError("oracle horizon " + std::to_string(T) + " exceeds " +
                      std::to_string(kMaxOracleHours) + " hours");
  }
}

inline std::vector<OrderStructure> enumerate_structures(std::size_t T) {
  check_horizon(T);
  std::vector<OrderStructure> out;
  std::vector<HourState> cur;
  auto rec = [&](auto&& self, std::size_t t) -> void {
    if (t == T) {
      out.push_back({cur});
      return;
    }
    for (HourState s : {HourState::Idle, HourState::Hourly}) {
      cur.push_back(s);
      self(self, t + 1);
      cur.pop_back();
    }
    for (std::size_t len = kMinBlockHours; t + len <= T; ++len) {
      cur.push_back(HourState::BlockStart);
      for (std::size_t k = 1; k < len; ++k) cur.push_back(HourState::BlockMember);
      self(self, t + len);
      cur.resize(t);
    }
  };
  rec(rec, 0);
  return out;
}

// Count by recursion over the first hour's choice, for cross-checking.
inline std::size_t count_structures(std::size_t T) {
  std::vector<std::size_t> c(T + 1, 0);
  c[0] = 1;
  for (std::size_t n = 1; n <= T; ++n) {
    c[n] = 2 * c[n - 1];
    for (std::size_t len = kMinBlockHours; len <= n; ++len) c[n] += c[n - len];
  }
  return c[T];
}

struct Restricted {
  mip::MipModel model;
  formulation::SharedVariables shared;
};

inline Restricted build_restricted(const Scenario& s, const PWLResponsiveness& pwl,
                                   const CostCurve& cost, const OrderStructure& st,
                                   bool equalVolume) {
  using mip::LinExpr;
  Restricted r;
  mip::LinExpr objective;
  r.shared = formulation::add_shared_block(r.model, s, pwl, cost, objective);
  const auto& v = r.shared;
  for (std::size_t t = 0; t < st.hours.size(); ++t) {
    switch (st.hours[t]) {
      case HourState::Idle:
        r.model.set_bounds(v.flexHour[t], 0.0, 0.0);
        r.model.set_bounds(v.flexBlock[t], 0.0, 0.0);
        break;
      case HourState::Hourly:
        r.model.set_bounds(v.flexBlock[t], 0.0, 0.0);
        break;
      default:
        r.model.set_bounds(v.flexHour[t], 0.0, 0.0);
        break;
    }
  }
  if (equalVolume) {
    for (const Run& b : st.blocks()) {
      for (std::size_t t = b.start + 1; t < b.start + b.length; ++t) {
        r.model.add_constraint(formulation::indexed("segment", t + 1), LinExpr::var(v.flex[t]),
                               mip::Sense::Equal, LinExpr::var(v.flex[b.start]), "oracle.segment");
      }
    }
  }
  r.model.set_objective(objective, true);
  return r;
}

struct OracleResult {
  double objective = 0.0;
  // Largest proven bound over all structures (equals objective when every
  // subproblem closed).
  double bound = 0.0;
  OrderBook book;
  OrderStructure structure;
  std::vector<double> flex, paid;
  std::size_t structures = 0;
  std::size_t solved = 0;
  std::size_t pruned = 0;
};

struct OracleOptions {
  double mipGap = 1e-6;
  double timeLimit = 3600.0;
  bool equalVolume = true;  // false: profile blocks
};

inline OrderBook book_from_structure(const OrderStructure& st, const std::vector<double>& flex,
                                     bool equalVolume, double tol = 1e-6) {
  OrderBook book;
  for (std::size_t t = 0; t < st.hours.size(); ++t) {
    if (st.hours[t] == HourState::Hourly) book.orders.push_back({OrderKind::Hourly, t, 1, flex[t], {}});
  }
  for (const Run& b : st.blocks()) {
    Order o{equalVolume ? OrderKind::Block : OrderKind::ProfileBlock, b.start, b.length,
            flex[b.start], {}};
    if (!equalVolume) {
      o.profile.assign(flex.begin() + static_cast<std::ptrdiff_t>(b.start),
                       flex.begin() + static_cast<std::ptrdiff_t>(b.start + b.length));
    }
    book.orders.push_back(std::move(o));
  }
  return canonicalize(book, tol);
}

inline OracleResult oracle_solve(const Scenario& s, const PWLResponsiveness& pwl,
                                 const CostCurve& cost, const std::vector<OrderStructure>& structures,
                                 const OracleOptions& opt = {}) {
  check_horizon(s.hours());
  if (auto rep = validate_scenario(s); !rep.ok()) throw DomainError("invalid scenario: " + rep.str());
  OracleResult res;
  res.structures = structures.size();

  struct Candidate {
    std::size_t index;
    double lpBound;
    std::string key;
  };
  std::vector<Candidate> order;
  for (std::size_t i = 0; i < structures.size(); ++i) {
    if (structures[i].hours.size() != s.hours()) {
      throw DimensionError("structure length differs from the scenario horizon");
    }
    const auto r = build_restricted(s, pwl, cost, structures[i], opt.equalVolume);
    order.push_back({i, solver::lp_relax(r.model), structures[i].encoding()});
  }
  std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
    if (a.lpBound != b.lpBound) return a.lpBound > b.lpBound;
    return a.key < b.key;
  });

  solver::SolverConfig cfg;
  cfg.mipGap = opt.mipGap;
  cfg.timeLimit = opt.timeLimit;
  bool have = false;
  double best = 0.0;
  double bound = -std::numeric_limits<double>::infinity();
  for (const auto& c : order) {
    const double tol = 1e-9 * (1.0 + std::abs(best));
    if (have && c.lpBound <= best + tol) {
      ++res.pruned;
      continue;
    }
    const auto r = build_restricted(s, pwl, cost, structures[c.index], opt.equalVolume);
    solver::SolveOptions so;
    if (have) so.cutoff = best;
    auto [sol, trace] = solver::solve(r.model, cfg, so);
    ++res.solved;
    bound = std::max(bound, sol.bestBound);
    if (!sol.has_incumbent()) continue;
    if (!have || sol.objective > best) {
      have = true;
      best = sol.objective;
      res.structure = structures[c.index];
      res.flex = formulation::gather(sol.values, r.shared.flex);
      res.paid = formulation::gather(sol.values, r.shared.paid);
    }
  }
  if (!have) throw Error("oracle found no feasible structure");
  res.objective = best;
  res.bound = std::max(bound, best);
  res.book = book_from_structure(res.structure, res.flex, opt.equalVolume);
  return res;
}

}  // namespace blockbid::oracle
