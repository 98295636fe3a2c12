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

// Rows and variables common to both formulations: the two-class flexibility
// model, the piecewise-linear price/flexibility tie, and the objective with
// the procurement cost replaced by the chord cost curve.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "blockbid/combinatorics.hpp"
#include "blockbid/core.hpp"
#include "blockbid/errors.hpp"
#include "blockbid/mip/model.hpp"
#include "blockbid/responsiveness.hpp"
#include "blockbid/solver/config.hpp"

namespace blockbid::formulation {

using mip::LinExpr;
using mip::MipModel;
using mip::Sense;
using mip::VarId;

enum class Kind { Brute, Logical };
enum class Variant { Regular, Profile };

inline std::string to_string(Kind k) { return k == Kind::Brute ? "brute" : "logical"; }
inline std::string to_string(Variant v) { return v == Variant::Regular ? "regular" : "profile"; }

inline Kind kind_from_string(const std::string& s) {
  if (s == "brute") return Kind::Brute;
  if (s == "logical") return Kind::Logical;
  throw ParseError("unknown formulation '" + s + "' (expected brute or logical)");
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "regular") return Variant::Regular;
  if (s == "profile") return Variant::Profile;
  throw ParseError("unknown variant '" + s + "' (expected regular or profile)");
}

// Handles into the shared block. Hour indices are 0-based here; variable
// names are 1-based.
struct SharedVariables {
  std::vector<VarId> flex, flexHour, flexBlock, paid;
  // Implied lower bounds (MWh, <= 0) of flex, flexHour and flexBlock.
  std::vector<double> flexLow, hourLow, blockLow;
  std::vector<std::vector<VarId>> pieceBin, pieceOffset;  // [t][segment]
};

struct BruteVariables {
  std::vector<Run> hourly, blocks;
  std::vector<VarId> volHour, volBlock, onHour, onBlock;
};

// Index 0 of order/duplicate/active is the fixed "before the horizon" slot;
// the remaining vectors are per hour (0-based).
struct LogicalVariables {
  std::vector<VarId> order, duplicate, active;
  std::vector<VarId> hour, block, start, both;
  std::vector<VarId> volPlus, volMinus;
};

// A built model plus the handles needed to read a solution back.
struct Formulation {
  Kind kind = Kind::Brute;
  Variant variant = Variant::Regular;
  MipModel model;
  SharedVariables shared;
  BruteVariables brute;
  LogicalVariables logical;
  // Objective weight per block-flagged hour (0 unless the bonus is on).
  double blockBonus = 0.0;
  // Worst-case gap between the chord objective and the bilinear profit.
  double chordErrorBound = 0.0;
};

inline std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}
inline std::string indexed(const std::string& base, std::size_t i, std::size_t j) {
  return base + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

inline std::vector<double> gather(const std::vector<double>& x, const std::vector<VarId>& ids) {
  std::vector<double> out;
  out.reserve(ids.size());
  for (VarId id : ids) out.push_back(x.at(id));
  return out;
}

// Big-M for a link on a quantity whose magnitude never exceeds `reach`.
inline double link_big_m(const solver::SolverConfig& cfg, double reach) {
  if (!cfg.tightenBigM) return cfg.bigM;
  return std::max(std::min(cfg.bigM, std::abs(reach)), 1e-6);
}

// Order-structure binaries are branched on before PWL piece binaries: once
// the structure is fixed the piece choice is nearly settled by the LP.
inline void prioritize_orders(MipModel& m, const SharedVariables& shared) {
  for (VarId v = 0; v < m.num_vars(); ++v) {
    if (m.var(v).kind == mip::VarKind::Binary) m.set_branch_priority(v, 1);
  }
  for (const auto& row : shared.pieceBin) {
    for (VarId v : row) m.set_branch_priority(v, 0);
  }
}

inline void check_inputs(const Scenario& s, const PWLResponsiveness& pwl, const CostCurve& cost,
                         const solver::SolverConfig& cfg) {
  if (s.hours() < 3) throw DomainError("horizon of " + std::to_string(s.hours()) + " hours is shorter than 3");
  if (auto rep = validate_scenario(s); !rep.ok()) throw DomainError("invalid scenario: " + rep.str());
  if (cost.segments.empty()) throw DomainError("empty cost curve");
  const auto bps = cost.breakpoints();
  if (std::abs(bps.front() - pwl.breakpoints.front()) > 1e-12 ||
      std::abs(bps.back() - pwl.breakpoints.back()) > 1e-12 ||
      cost.segments.back().piece + 1 != pwl.pieces()) {
    throw DomainError("cost curve was not built from this responsiveness curve");
  }
  for (const auto& seg : cost.segments) {
    const double expect = pwl_flexibility(pwl, seg.lambdaStart);
    if (std::abs(expect - seg.flexStart) > 1e-9 * (1.0 + std::abs(expect))) {
      throw DomainError("cost curve was not built from this responsiveness curve");
    }
  }
  solver::validate(cfg, s.responsiveness.fMax);
}

// Adds the shared variables and rows and returns the profit objective
// (without setting it).
inline SharedVariables add_shared_block(MipModel& m, const Scenario& s, const PWLResponsiveness& pwl,
                                        const CostCurve& cost, LinExpr& objective) {
  const std::size_t T = s.hours();
  const double minFlex = std::min(pwl.shifted(pwl.pieces()), 0.0);
  const double fLow = std::max(-s.responsiveness.fMax, minFlex);
  SharedVariables v;
  // Each class is bounded below by its own profile (cross elasticities only
  // shrink availability) and by the total.
  for (std::size_t t = 0; t < T; ++t) {
    v.hourLow.push_back(std::min(0.0, std::max(s.hourModel.profile[t], fLow)));
    v.blockLow.push_back(std::min(0.0, std::max(s.blockModel.profile[t], fLow)));
    v.flexLow.push_back(std::max(fLow, v.hourLow[t] + v.blockLow[t]));
  }
  for (std::size_t t = 0; t < T; ++t) {
    v.flex.push_back(m.add_continuous(indexed("F", t + 1), v.flexLow[t], 0.0));
  }
  for (std::size_t t = 0; t < T; ++t) {
    v.flexHour.push_back(m.add_continuous(indexed("Fh", t + 1), v.hourLow[t], 0.0));
  }
  for (std::size_t t = 0; t < T; ++t) {
    v.flexBlock.push_back(m.add_continuous(indexed("Fb", t + 1), v.blockLow[t], 0.0));
  }
  for (std::size_t t = 0; t < T; ++t) {
    v.paid.push_back(m.add_continuous(indexed("lam", t + 1), 0.0, pwl.lambdaMax()));
  }

  auto add_class = [&](const FlexibilityModel& model, const std::vector<VarId>& f,
                       const std::string& name, const std::string& tag) {
    for (std::size_t t = 0; t < T; ++t) {
      // F_t - sum_{j<t} A_tj F_j >= F^max_t
      LinExpr lhs = LinExpr::var(f[t]);
      for (std::size_t j = 0; j < t; ++j) {
        const double a = model.cem(t, j);
        if (a != 0.0) lhs -= LinExpr::var(f[j], a);
      }
      m.add_constraint(indexed(name, t + 1), lhs, Sense::GreaterEqual, model.profile[t], tag);
    }
  };
  add_class(s.hourModel, v.flexHour, "flex_hour", "flex.hour_class");
  add_class(s.blockModel, v.flexBlock, "flex_block", "flex.block_class");
  for (std::size_t t = 0; t < T; ++t) {
    m.add_constraint(indexed("flex_split", t + 1), LinExpr::var(v.flex[t]), Sense::Equal,
                     LinExpr::var(v.flexHour[t]) + LinExpr::var(v.flexBlock[t]), "flex.split");
  }

  const std::size_t K = cost.size();
  v.pieceBin.resize(T);
  v.pieceOffset.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    LinExpr one, price, flex;
    for (std::size_t k = 0; k < K; ++k) {
      const auto& seg = cost.segments[k];
      const VarId b = m.add_binary(indexed("bpwl", t + 1, k + 1));
      const VarId u = m.add_continuous(indexed("upwl", t + 1, k + 1), 0.0, seg.width);
      v.pieceBin[t].push_back(b);
      v.pieceOffset[t].push_back(u);
      one += LinExpr::var(b);
      price += LinExpr::var(u) + LinExpr::var(b, seg.lambdaStart);
      flex += LinExpr::var(b, seg.flexStart) + LinExpr::var(u, seg.flexSlope);
      m.add_constraint(indexed("pwl_width", t + 1, k + 1), LinExpr::var(u), Sense::LessEqual,
                       LinExpr::var(b, seg.width), "pwl.width");
      objective += LinExpr::var(b, seg.costStart) + LinExpr::var(u, seg.costSlope);
    }
    m.add_constraint(indexed("pwl_one", t + 1), one, Sense::Equal, 1.0, "pwl.one_piece");
    m.add_constraint(indexed("pwl_price", t + 1), LinExpr::var(v.paid[t]), Sense::Equal, price,
                     "pwl.price");
    m.add_constraint(indexed("pwl_flex", t + 1), LinExpr::var(v.flex[t]), Sense::Equal, flex,
                     "pwl.flex");
    // Revenue -F_t * spot_t; the chord cost above stands in for F_t * paid_t.
    objective += LinExpr::var(v.flex[t], -s.prices[t]);
  }
  return v;
}

}  // namespace blockbid::formulation
