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

// Plain-text solution files: one "name value" pair per line, '#' starts a
// comment. Two comment forms carry metadata:
//   # objective: <value>
//   # status: <text>

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blockbid/errors.hpp"
#include "blockbid/log.hpp"
#include "blockbid/mip/format.hpp"
#include "blockbid/mip/model.hpp"

namespace blockbid::mip {

struct SolutionFile {
  std::map<std::string, double> values;
  double objective = 0.0;
  std::string status;
  // Values in model variable order.
  std::vector<double> x;
};

inline std::string to_solution_string(const MipModel& m, const std::vector<double>& x,
                                      double objective, const std::string& status) {
  std::ostringstream os;
  os << "# objective: " << format_number(objective) << '\n';
  os << "# status: " << status << '\n';
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    os << m.var(v).name << ' ' << format_number(x.at(v)) << '\n';
  }
  return os.str();
}

// Parses a solution for `m`. Missing variables default to 0 with a warning;
// an unknown name, an unparseable line, or a value outside the variable's
// bounds by more than `tol` throws. `names` maps written names (e.g. from an
// MPS export) back to model names.
inline SolutionFile parse_solution(const std::string& text, const MipModel& m, double tol = 1e-6,
                                   const NameMap* names = nullptr) {
  std::map<std::string, std::string> back;
  if (names) back = names->reverse_variables();
  SolutionFile sol;
  std::optional<double> declaredObjective;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto p = line.find('#'); p != std::string::npos) {
      const std::string comment = line.substr(p + 1);
      auto tok = split_ws(comment);
      if (tok.size() == 2 && tok[0] == "objective:") {
        auto v = parse_number(tok[1]);
        if (!v) throw ParseError("solution line " + std::to_string(lineNo) + ": bad objective");
        declaredObjective = *v;
      } else if (tok.size() >= 2 && tok[0] == "status:") {
        sol.status = std::string(tok[1]);
      }
      line.erase(p);
    }
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) {
      throw ParseError("solution line " + std::to_string(lineNo) + ": expected 'name value'");
    }
    std::string name(tok[0]);
    if (auto it = back.find(name); it != back.end()) name = it->second;
    auto v = parse_number(tok[1]);
    if (!v) {
      throw ParseError("solution line " + std::to_string(lineNo) + ": bad value '" +
                       std::string(tok[1]) + "'");
    }
    if (!m.find_var(name)) {
      throw ParseError("solution line " + std::to_string(lineNo) + ": unknown variable '" + name + "'");
    }
    sol.values[name] = *v;
  }
  sol.x.assign(m.num_vars(), 0.0);
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    const auto& var = m.var(v);
    auto it = sol.values.find(var.name);
    if (it == sol.values.end()) {
      warn("solution has no value for '" + var.name + "', using 0");
      sol.values[var.name] = 0.0;
      continue;
    }
    const double val = it->second;
    if (val < var.lower - tol || val > var.upper + tol) {
      throw DomainError("solution value " + format_number(val) + " for '" + var.name +
                        "' violates bounds [" + format_number(var.lower) + ", " +
                        format_number(var.upper) + "]");
    }
    sol.x[v] = val;
  }
  sol.objective = declaredObjective ? *declaredObjective : m.objective_value(sol.x);
  return sol;
}

inline SolutionFile read_solution(const std::string& path, const MipModel& m, double tol = 1e-6,
                                  const NameMap* names = nullptr) {
  return parse_solution(read_text_file(path), m, tol, names);
}

}  // namespace blockbid::mip
