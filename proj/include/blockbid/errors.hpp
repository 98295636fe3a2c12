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
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockbid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (e.g. a price above
// the knee price of a responsiveness curve).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// One finding of a report-style check. `location` is free text such as
// "hourModel.cem[2][2]" or "order 3".
struct Violation {
  std::string kind;
  std::string location;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t size() const { return violations.size(); }

  void add(std::string kind, std::string location, std::string detail = {}) {
    violations.push_back({std::move(kind), std::move(location), std::move(detail)});
  }

  bool contains(const std::string& kind) const {
    for (const auto& v : violations) {
      if (v.kind == kind) return true;
    }
    return false;
  }

  void append(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }

  std::string str() const {
    std::ostringstream os;
    for (const auto& v : violations) {
      os << v.kind << " at " << v.location;
      if (!v.detail.empty()) os << " (" << v.detail << ")";
      os << '\n';
    }
    return os.str();
  }
};

}  // namespace blockbid
