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

#include <cstddef>
#include <string>
#include <vector>

#include "blockbid/combinatorics.hpp"
#include "blockbid/core.hpp"
#include "blockbid/formulation/brute.hpp"
#include "blockbid/formulation/logical.hpp"
#include "blockbid/formulation/shared.hpp"

namespace blockbid::formulation {

inline const std::vector<double>& default_breakpoints() {
  static const std::vector<double> bps{0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  return bps;
}

// Responsiveness curves for a scenario: the PWL over `breakpoints` (scaled to
// the scenario's knee price when left empty) and its cost curve.
struct Curves {
  PWLResponsiveness pwl;
  CostCurve cost;
};

inline Curves make_curves(const Scenario& s, std::size_t R, std::vector<double> breakpoints = {}) {
  if (breakpoints.empty()) {
    const double scale = s.responsiveness.lambdaMax / default_breakpoints().back();
    for (double b : default_breakpoints()) breakpoints.push_back(b * scale);
    breakpoints.back() = s.responsiveness.lambdaMax;
  }
  Curves c;
  c.pwl = build_pwl(s.responsiveness, breakpoints);
  c.cost = build_cost_curve(c.pwl, R);
  return c;
}

inline Formulation build(Kind kind, const Scenario& s, const Curves& curves,
                         const solver::SolverConfig& cfg, Variant variant = Variant::Regular) {
  if (kind == Kind::Brute) {
    if (variant != Variant::Regular) {
      throw DomainError("the brute formulation only models regular block orders");
    }
    return build_brute(s, curves.pwl, curves.cost, cfg);
  }
  return build_logical(s, curves.pwl, curves.cost, cfg, variant);
}

// Reads the order book out of a solution vector.
inline OrderBook decode(const Formulation& f, const std::vector<double>& x, double tol = 1e-6) {
  const std::vector<double> flex = gather(x, f.shared.flex);
  const std::size_t T = flex.size();
  std::vector<double> uHour(T, 0.0), uBlock(T, 0.0);
  DecodeOptions opt;
  opt.tol = tol;
  opt.blockStarts.assign(T, 0.0);
  if (f.kind == Kind::Brute) {
    const auto& v = f.brute;
    for (std::size_t h = 0; h < v.hourly.size(); ++h) uHour[v.hourly[h].start] += x.at(v.onHour[h]);
    for (std::size_t b = 0; b < v.blocks.size(); ++b) {
      const double on = x.at(v.onBlock[b]);
      const Run& r = v.blocks[b];
      for (std::size_t t = r.start; t < r.start + r.length; ++t) uBlock[t] += on;
      opt.blockStarts[r.start] += on;
    }
  } else {
    const auto& v = f.logical;
    uHour = gather(x, v.hour);
    uBlock = gather(x, v.block);
    for (std::size_t t = 0; t < T; ++t) {
      // A block hour that does not repeat the previous order opens a block.
      opt.blockStarts[t] = uBlock[t] > 0.5 && x.at(v.duplicate[t + 1]) < 0.5 ? 1.0 : 0.0;
    }
    opt.requireEqualVolume = f.variant == Variant::Regular;
  }
  return decode_orders(flex, uHour, uBlock, opt);
}

struct Evaluation {
  double objective = 0.0;        // model objective, bonus included
  double marketObjective = 0.0;  // model objective without the block bonus
  double profit = 0.0;           // bilinear profit at the solution's F and paid price
  std::vector<double> flex, flexHour, flexBlock, paid;
};

inline Evaluation evaluate(const Formulation& f, const Scenario& s, const std::vector<double>& x) {
  Evaluation e;
  e.objective = f.model.objective_value(x);
  e.marketObjective = e.objective;
  if (f.blockBonus != 0.0) {
    if (f.kind == Kind::Logical) {
      for (VarId v : f.logical.block) e.marketObjective -= f.blockBonus * x.at(v);
    } else {
      for (std::size_t b = 0; b < f.brute.blocks.size(); ++b) {
        e.marketObjective -= f.blockBonus * static_cast<double>(f.brute.blocks[b].length) *
                             x.at(f.brute.onBlock[b]);
      }
    }
  }
  e.flex = gather(x, f.shared.flex);
  e.flexHour = gather(x, f.shared.flexHour);
  e.flexBlock = gather(x, f.shared.flexBlock);
  e.paid = gather(x, f.shared.paid);
  e.profit = profit(e.flex, s.prices, e.paid);
  return e;
}

}  // namespace blockbid::formulation
