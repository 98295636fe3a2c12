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

// Explicit-combination model: one volume and one binary per candidate hourly
// order and per candidate block order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "blockbid/combinatorics.hpp"
#include "blockbid/formulation/shared.hpp"

namespace blockbid::formulation {

inline Formulation build_brute(const Scenario& s, const PWLResponsiveness& pwl,
                               const CostCurve& cost, const solver::SolverConfig& cfg) {
  check_inputs(s, pwl, cost, cfg);
  const std::size_t T = s.hours();
  const double M = cfg.bigM;
  Formulation f;
  f.kind = Kind::Brute;
  f.chordErrorBound = static_cast<double>(T) * cost.maxChordError;
  MipModel& m = f.model;
  m.name = "blockbid_brute";
  LinExpr objective;
  f.shared = add_shared_block(m, s, pwl, cost, objective);

  auto& v = f.brute;
  v.hourly = enumerate_hourly(T);
  v.blocks = enumerate_blocks(T);
  // A combination's volume can never exceed what its hours allow.
  std::vector<double> hourReach, blockReach;
  for (const Run& r : v.hourly) hourReach.push_back(link_big_m(cfg, f.shared.hourLow[r.start]));
  for (const Run& r : v.blocks) {
    double reach = M;
    for (std::size_t t = r.start; t < r.start + r.length; ++t) {
      reach = std::min(reach, std::abs(f.shared.blockLow[t]));
    }
    blockReach.push_back(link_big_m(cfg, reach));
  }
  for (std::size_t h = 0; h < v.hourly.size(); ++h) {
    v.volHour.push_back(m.add_continuous(indexed("Vh", h + 1), -M, 0.0));
  }
  for (std::size_t b = 0; b < v.blocks.size(); ++b) {
    v.volBlock.push_back(m.add_continuous(indexed("Vb", b + 1), -M, 0.0));
  }
  for (std::size_t h = 0; h < v.hourly.size(); ++h) {
    v.onHour.push_back(m.add_binary(indexed("bh", h + 1)));
  }
  for (std::size_t b = 0; b < v.blocks.size(); ++b) {
    v.onBlock.push_back(m.add_binary(indexed("bb", b + 1)));
  }

  for (std::size_t t = 0; t < T; ++t) {
    LinExpr hourSum, blockSum, active;
    for (std::size_t h = 0; h < v.hourly.size(); ++h) {
      if (v.hourly[h].start == t) {
        hourSum += LinExpr::var(v.volHour[h]);
        active += LinExpr::var(v.onHour[h]);
      }
    }
    for (std::size_t b = 0; b < v.blocks.size(); ++b) {
      const Run& r = v.blocks[b];
      if (r.start <= t && t < r.start + r.length) {
        blockSum += LinExpr::var(v.volBlock[b]);
        active += LinExpr::var(v.onBlock[b]);
      }
    }
    m.add_constraint(indexed("map_hour", t + 1), LinExpr::var(f.shared.flexHour[t]), Sense::Equal,
                     hourSum, "brute.hour_map");
    m.add_constraint(indexed("map_block", t + 1), LinExpr::var(f.shared.flexBlock[t]),
                     Sense::Equal, blockSum, "brute.block_map");
    m.add_constraint(indexed("one_order", t + 1), active, Sense::LessEqual, 1.0,
                     "brute.one_order");
  }
  for (std::size_t h = 0; h < v.hourly.size(); ++h) {
    m.add_constraint(indexed("act_hour", h + 1), LinExpr::var(v.volHour[h]), Sense::GreaterEqual,
                     LinExpr::var(v.onHour[h], -hourReach[h]), "brute.activation");
  }
  for (std::size_t b = 0; b < v.blocks.size(); ++b) {
    m.add_constraint(indexed("act_block", b + 1), LinExpr::var(v.volBlock[b]),
                     Sense::GreaterEqual, LinExpr::var(v.onBlock[b], -blockReach[b]), "brute.activation");
  }
  if (cfg.blockBonus) {
    f.blockBonus = cfg.blockBonusWeight;
    for (std::size_t b = 0; b < v.blocks.size(); ++b) {
      objective += LinExpr::var(v.onBlock[b], f.blockBonus * static_cast<double>(v.blocks[b].length));
    }
  }
  m.set_objective(objective, true);
  prioritize_orders(m, f.shared);
  return f;
}

}  // namespace blockbid::formulation
