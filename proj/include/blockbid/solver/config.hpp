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
#include <cstdint>
#include <string>

#include "blockbid/errors.hpp"

namespace blockbid::solver {

struct SolverConfig {
  double mipGap = 0.01;
  double timeLimit = 3600.0;  // seconds
  double bigM = 40.0;         // MWh
  // Caps each big-M coefficient at the magnitude the linked variable can
  // actually reach. Integer-feasible points are unchanged.
  bool tightenBigM = true;
  double feasTol = 1e-6;
  double intTol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t R = 4;  // cost-curve refinement
  std::size_t threads = 1;
  // Adds a tiny objective reward per block-flagged hour so that ties between
  // hourly and block bids resolve towards blocks. Excluded from reported profit.
  bool blockBonus = false;
  double blockBonusWeight = 1e-7;
};

inline void validate(const SolverConfig& cfg, double fMax) {
  if (!(cfg.mipGap > 0.0)) throw DomainError("mipGap must be > 0");
  if (!(cfg.timeLimit > 0.0)) throw DomainError("timeLimit must be > 0");
  if (cfg.R < 1) throw DomainError("R must be >= 1");
  if (cfg.threads < 1) throw DomainError("threads must be >= 1");
  if (cfg.bigM < 2.0 * fMax) {
    throw DomainError("bigM " + std::to_string(cfg.bigM) + " is below 2 * f_max = " +
                      std::to_string(2.0 * fMax));
  }
}

}  // namespace blockbid::solver
