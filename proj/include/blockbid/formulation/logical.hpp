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

// Duplicate-tracking model. Per hour: b^order (an order is placed) and
// b^dup (the order repeats the previous hour's). Logical gadgets derive the
// hourly/block status, keep duplicate runs at least two long so every block
// spans three hours, and tie duplicated hours to equal volume.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "blockbid/formulation/shared.hpp"

namespace blockbid::formulation {

inline Formulation build_logical(const Scenario& s, const PWLResponsiveness& pwl,
                                 const CostCurve& cost, const solver::SolverConfig& cfg,
                                 Variant variant = Variant::Regular) {
  check_inputs(s, pwl, cost, cfg);
  using mip::Lit;
  const std::size_t T = s.hours();
  Formulation f;
  f.kind = Kind::Logical;
  f.variant = variant;
  f.chordErrorBound = static_cast<double>(T) * cost.maxChordError;
  MipModel& m = f.model;
  m.name = "blockbid_logical";
  LinExpr objective;
  f.shared = add_shared_block(m, s, pwl, cost, objective);
  const auto& F = f.shared.flex;

  auto& v = f.logical;
  // Slot 0 precedes the horizon and is pinned to zero; u^active is also
  // pinned at slot 1.
  for (std::size_t t = 0; t <= T; ++t) {
    v.order.push_back(m.add_binary(indexed("bo", t), 0.0, t == 0 ? 0.0 : 1.0));
  }
  for (std::size_t t = 0; t <= T; ++t) {
    v.duplicate.push_back(m.add_binary(indexed("bd", t), 0.0, t == 0 ? 0.0 : 1.0));
  }
  for (std::size_t t = 0; t <= T; ++t) {
    v.active.push_back(m.add_continuous(indexed("ua", t), 0.0, t <= 1 ? 0.0 : 1.0));
  }
  for (std::size_t t = 1; t <= T; ++t) v.hour.push_back(m.add_continuous(indexed("uh", t), 0.0, 1.0));
  for (std::size_t t = 1; t <= T; ++t) v.block.push_back(m.add_continuous(indexed("ub", t), 0.0, 1.0));
  for (std::size_t t = 1; t <= T; ++t) {
    // No block can start in the last two hours.
    v.start.push_back(m.add_continuous(indexed("us", t), 0.0, t + 1 >= T ? 0.0 : 1.0));
  }
  for (std::size_t t = 1; t + 1 <= T; ++t) {
    v.both.push_back(m.add_continuous(indexed("uw", t), 0.0, 1.0));
  }
  if (variant == Variant::Regular) {
    for (std::size_t t = 1; t <= T; ++t) v.volPlus.push_back(m.add_binary(indexed("bvp", t)));
    for (std::size_t t = 1; t <= T; ++t) v.volMinus.push_back(m.add_binary(indexed("bvm", t)));
  }

  auto bo = [&](std::size_t t) { return Lit::of(v.order[t]); };
  auto bd = [&](std::size_t t) { return Lit::of(v.duplicate[t]); };
  auto ua = [&](std::size_t t) { return Lit::of(v.active[t]); };
  auto uh = [&](std::size_t t) { return Lit::of(v.hour[t - 1]); };
  auto ub = [&](std::size_t t) { return Lit::of(v.block[t - 1]); };
  auto us = [&](std::size_t t) { return Lit::of(v.start[t - 1]); };

  for (std::size_t t = 2; t <= T; ++t) {
    // The previous hour is the first duplicate of a run.
    mip::add_and(m, indexed("active", t), ua(t), bd(t - 1), !bd(t - 2), "logic.duration");
  }
  for (std::size_t t = 1; t <= T; ++t) {
    // (order, dup) = (0, 1) is illegal, and a duplicate needs an order before it.
    m.add_constraint(indexed("illegal_prev", t), (!bo(t - 1)).expr() + bd(t).expr(),
                     Sense::LessEqual, 1.0, "logic.illegal");
    m.add_constraint(indexed("illegal_same", t), (!bo(t)).expr() + bd(t).expr(),
                     Sense::LessEqual, 1.0, "logic.illegal");
  }
  for (std::size_t t = 1; t <= T; ++t) {
    m.add_constraint(indexed("enforce_lo", t), ua(t).expr(), Sense::LessEqual, bd(t).expr(),
                     "logic.enforce");
    m.add_constraint(indexed("enforce_hi", t), bd(t).expr(), Sense::LessEqual,
                     ua(t).expr() + LinExpr(1.0), "logic.enforce");
  }
  for (std::size_t t = 1; t + 1 <= T; ++t) {
    mip::add_and(m, indexed("start", t), us(t), !bd(t), bd(t + 1), "logic.start");
  }
  for (std::size_t t = 1; t + 1 <= T; ++t) {
    const Lit w = Lit::of(v.both[t - 1]);
    mip::add_and(m, indexed("dup_order", t), w, bo(t), bd(t), "logic.block_status");
    mip::add_or(m, indexed("block", t), ub(t), w, us(t), "logic.block_status");
  }
  // A block may end exactly on the last hour.
  mip::add_and(m, indexed("block", T), ub(T), bo(T), bd(T), "logic.block_status");
  for (std::size_t t = 1; t <= T; ++t) {
    m.add_constraint(indexed("status", t), uh(t).expr() + ub(t).expr(), Sense::Equal,
                     bo(t).expr(), "logic.status");
  }
  if (variant == Variant::Regular) {
    for (std::size_t t = 1; t <= T; ++t) {
      mip::add_and(m, indexed("dup_flags", t), bd(t), Lit::of(v.volPlus[t - 1]),
                   Lit::of(v.volMinus[t - 1]), "logic.equal_volume");
      const LinExpr prev = t == 1 ? LinExpr(0.0) : LinExpr::var(F[t - 2]);
      const double reach = std::max(t == 1 ? 0.0 : std::abs(f.shared.flexLow[t - 2]),
                                    std::abs(f.shared.flexLow[t - 1]));
      mip::add_bigM_equal_if(m, indexed("equal_volume", t), prev, LinExpr::var(F[t - 1]),
                             v.volPlus[t - 1], v.volMinus[t - 1], link_big_m(cfg, reach),
                             "logic.equal_volume");
    }
  }
  for (std::size_t t = 1; t <= T; ++t) {
    const auto& sv = f.shared;
    m.add_constraint(indexed("link_order", t), LinExpr::var(F[t - 1]), Sense::GreaterEqual,
                     bo(t).expr() * -link_big_m(cfg, sv.flexLow[t - 1]), "logic.link");
    m.add_constraint(indexed("link_hour", t), LinExpr::var(sv.flexHour[t - 1]),
                     Sense::GreaterEqual, uh(t).expr() * -link_big_m(cfg, sv.hourLow[t - 1]),
                     "logic.link");
    m.add_constraint(indexed("link_block", t), LinExpr::var(sv.flexBlock[t - 1]),
                     Sense::GreaterEqual, ub(t).expr() * -link_big_m(cfg, sv.blockLow[t - 1]),
                     "logic.link");
  }
  if (cfg.blockBonus) {
    f.blockBonus = cfg.blockBonusWeight;
    for (std::size_t t = 1; t <= T; ++t) objective += LinExpr::var(v.block[t - 1], f.blockBonus);
  }
  m.set_objective(objective, true);
  prioritize_orders(m, f.shared);
  return f;
}

}  // namespace blockbid::formulation
