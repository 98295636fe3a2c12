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
#include <vector>

#include "blockbid/combinatorics.hpp"
#include "blockbid/core.hpp"
#include "blockbid/formulation/formulation.hpp"
#include "blockbid/solver/branch_and_bound.hpp"
#include "blockbid/solver/config.hpp"

namespace blockbid {

struct RunOptions {
  formulation::Kind kind = formulation::Kind::Logical;
  formulation::Variant variant = formulation::Variant::Regular;
  solver::SolverConfig cfg;
  // Responsiveness breakpoints; empty means the default grid scaled to the
  // scenario's knee price.
  std::vector<double> breakpoints;
};

struct RunResult {
  formulation::Curves curves;
  formulation::Formulation formulation;
  solver::Solution solution;
  solver::GapTrace trace;
  // Filled when the solver returned an incumbent.
  formulation::Evaluation evaluation;
  OrderBook book;

  bool has_incumbent() const { return solution.has_incumbent(); }
  std::size_t binaries() const { return formulation.model.num_binaries(); }
};

inline formulation::Formulation build_model(const Scenario& s, const formulation::Curves& curves,
                                            const RunOptions& opt) {
  if (auto rep = validate_scenario(s); !rep.ok()) throw DomainError("invalid scenario: " + rep.str());
  solver::validate(opt.cfg, s.responsiveness.fMax);
  return formulation::build(opt.kind, s, curves, opt.cfg, opt.variant);
}

inline RunResult run_scenario(const Scenario& s, const RunOptions& opt,
                              const solver::SolveOptions& solveOpt = {}) {
  RunResult r;
  r.curves = formulation::make_curves(s, opt.cfg.R, opt.breakpoints);
  r.formulation = build_model(s, r.curves, opt);
  std::tie(r.solution, r.trace) = solver::solve(r.formulation.model, opt.cfg, solveOpt);
  if (r.solution.has_incumbent()) {
    r.evaluation = formulation::evaluate(r.formulation, s, r.solution.values);
    r.book = canonicalize(formulation::decode(r.formulation, r.solution.values));
  }
  return r;
}

}  // namespace blockbid
