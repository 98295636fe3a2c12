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

#include "blockbid/combinatorics.hpp"
#include "blockbid/core.hpp"
#include "blockbid/errors.hpp"
#include "blockbid/formulation/formulation.hpp"
#include "blockbid/log.hpp"
#include "blockbid/mip/lp_format.hpp"
#include "blockbid/mip/model.hpp"
#include "blockbid/mip/mps_format.hpp"
#include "blockbid/mip/solution_io.hpp"
#include "blockbid/oracle.hpp"
#include "blockbid/report.hpp"
#include "blockbid/responsiveness.hpp"
#include "blockbid/run.hpp"
#include "blockbid/scenarios.hpp"
#include "blockbid/solver/branch_and_bound.hpp"
#include "blockbid/solver/config.hpp"
