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

// Locale-free number formatting and parsing shared by the model and solution
// file formats. Doubles print as the shortest decimal that reads back to the
// same bits.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "blockbid/errors.hpp"

namespace blockbid::mip {

inline std::string format_number(double v) {
  if (std::isnan(v)) throw DomainError("cannot format NaN");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw DomainError("number formatting failed");
  return std::string(buf, ptr);
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  auto lower = [](std::string_view x) {
    std::string out(x);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string l = lower(s);
  if (l == "inf" || l == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (l == "-inf" || l == "-infinity") {
    return -std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Original model name -> name written to a file, for names a format could not
// carry.
struct NameMap {
  std::map<std::string, std::string> variables;
  std::map<std::string, std::string> constraints;

  bool empty() const { return variables.empty() && constraints.empty(); }

  // Sidecar text: "var|con <written> <original>" per line, sorted.
  void write(std::ostream& os) const {
    for (const auto& [orig, written] : variables) os << "var " << written << ' ' << orig << '\n';
    for (const auto& [orig, written] : constraints) os << "con " << written << ' ' << orig << '\n';
  }

  static NameMap read(std::istream& is) {
    NameMap m;
    std::string line;
    while (std::getline(is, line)) {
      auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok.size() != 3 || (tok[0] != "var" && tok[0] != "con")) {
        throw ParseError("bad name map line: " + line);
      }
      (tok[0] == "var" ? m.variables : m.constraints)
          .emplace(std::string(tok[2]), std::string(tok[1]));
    }
    return m;
  }

  // written -> original for variables.
  std::map<std::string, std::string> reverse_variables() const {
    std::map<std::string, std::string> r;
    for (const auto& [orig, written] : variables) r.emplace(written, orig);
    return r;
  }
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace blockbid::mip
