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

// Fixed-field MPS. Row and column names are limited to 8 characters; when
// any name is longer (or contains a blank) every name is replaced by a
// deterministic C%07zu / R%07zu code and the mapping is returned. Numbers are
// written in shortest round-trip form starting at column 25; a number longer
// than 12 characters runs past its nominal field, so the reader tokenizes on
// whitespace rather than column positions.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blockbid/errors.hpp"
#include "blockbid/mip/format.hpp"
#include "blockbid/mip/model.hpp"

namespace blockbid::mip {

inline constexpr std::size_t kMpsMaxNameLength = 8;

namespace detail {

inline bool valid_mps_name(const std::string& n) {
  if (n.empty() || n.size() > kMpsMaxNameLength || n == "OBJ" || n == "RHS" || n == "BND") {
    return false;
  }
  for (char c : n) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '$' || c == '*') return false;
  }
  return true;
}

// Pads `line` with blanks up to 1-based column `col`.
inline void pad_to(std::string& line, std::size_t col) {
  if (line.size() < col - 1) line.resize(col - 1, ' ');
  else line += ' ';
}

inline std::string mps_line(const std::string& f1, const std::string& f2, const std::string& f3,
                            const std::string& f4) {
  std::string line = " " + f1;
  pad_to(line, 5);
  line += f2;
  if (f3.empty() && f4.empty()) return line;
  pad_to(line, 15);
  line += f3;
  if (!f4.empty()) {
    pad_to(line, 25);
    line += f4;
  }
  return line;
}

}  // namespace detail

inline std::string to_mps_string(const MipModel& m, NameMap* renamed = nullptr) {
  bool rename = false;
  for (const auto& v : m.variables()) rename = rename || !detail::valid_mps_name(v.name);
  for (const auto& c : m.constraints()) rename = rename || !detail::valid_mps_name(c.name);
  NameMap local;
  std::vector<std::string> vn, cn;
  char buf[16];
  for (std::size_t i = 0; i < m.num_vars(); ++i) {
    if (rename) {
      std::snprintf(buf, sizeof buf, "C%07zu", i + 1);
      vn.emplace_back(buf);
      local.variables.emplace(m.var(i).name, vn.back());
    } else {
      vn.push_back(m.var(i).name);
    }
  }
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    if (rename) {
      std::snprintf(buf, sizeof buf, "R%07zu", i + 1);
      cn.emplace_back(buf);
      local.constraints.emplace(m.constraint(i).name, cn.back());
    } else {
      cn.push_back(m.constraint(i).name);
    }
  }

  // Column-major coefficient lists, objective first.
  std::vector<std::vector<std::pair<std::string, double>>> cols(m.num_vars());
  for (const auto& t : m.objective().terms) cols[t.var].emplace_back("OBJ", t.coef);
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    for (const auto& t : m.constraint(i).terms) cols[t.var].emplace_back(cn[i], t.coef);
  }

  std::ostringstream os;
  os << "NAME          " << m.name << '\n';
  os << "OBJSENSE\n    " << (m.objective().maximize ? "MAX" : "MIN") << '\n';
  os << "ROWS\n";
  os << detail::mps_line("N", "OBJ", "", "") << '\n';
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    const auto s = m.constraint(i).sense;
    os << detail::mps_line(s == Sense::LessEqual ? "L" : s == Sense::Equal ? "E" : "G", cn[i], "", "")
       << '\n';
  }
  os << "COLUMNS\n";
  bool inInt = false;
  std::size_t marker = 0;
  auto markerLine = [&](const char* kind) {
    std::snprintf(buf, sizeof buf, "M%07zu", ++marker);
    std::string line = "    ";
    line += buf;
    detail::pad_to(line, 15);
    line += "'MARKER'";
    detail::pad_to(line, 40);
    line += kind;
    os << line << '\n';
  };
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    const bool isInt = m.var(v).kind == VarKind::Binary;
    if (isInt && !inInt) markerLine("'INTORG'");
    if (!isInt && inInt) markerLine("'INTEND'");
    inInt = isInt;
    if (cols[v].empty()) {
      // Keeps the column declared even without coefficients.
      os << detail::mps_line("", vn[v], "OBJ", "0") << '\n';
    }
    for (const auto& [row, coef] : cols[v]) {
      os << detail::mps_line("", vn[v], row, format_number(coef)) << '\n';
    }
  }
  if (inInt) markerLine("'INTEND'");
  os << "RHS\n";
  if (m.objective().constant != 0.0) {
    os << detail::mps_line("", "RHS", "OBJ", format_number(-m.objective().constant)) << '\n';
  }
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    if (m.constraint(i).rhs != 0.0) {
      os << detail::mps_line("", "RHS", cn[i], format_number(m.constraint(i).rhs)) << '\n';
    }
  }
  os << "BOUNDS\n";
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    const auto& var = m.var(v);
    if (var.kind == VarKind::Binary && var.lower == 0.0 && var.upper == 1.0) {
      os << detail::mps_line("BV", "BND", vn[v], "") << '\n';
      continue;
    }
    if (var.lower == var.upper) {
      os << detail::mps_line("FX", "BND", vn[v], format_number(var.lower)) << '\n';
      continue;
    }
    if (std::isinf(var.lower) && std::isinf(var.upper)) {
      os << detail::mps_line("FR", "BND", vn[v], "") << '\n';
      continue;
    }
    if (std::isinf(var.lower)) {
      os << detail::mps_line("MI", "BND", vn[v], "") << '\n';
    } else {
      os << detail::mps_line("LO", "BND", vn[v], format_number(var.lower)) << '\n';
    }
    if (!std::isinf(var.upper)) {
      os << detail::mps_line("UP", "BND", vn[v], format_number(var.upper)) << '\n';
    }
  }
  os << "ENDATA\n";
  if (renamed) *renamed = std::move(local);
  return os.str();
}

inline NameMap write_mps(const MipModel& m, const std::string& path) {
  NameMap renamed;
  write_text_file(path, to_mps_string(m, &renamed));
  if (!renamed.empty()) {
    std::ostringstream os;
    renamed.write(os);
    write_text_file(path + ".names", os.str());
  }
  return renamed;
}

// Parses MPS text as written by to_mps_string (whitespace-separated fields).
// With `names`, written names are mapped back to the originals.
inline MipModel parse_mps(const std::string& text, const NameMap* names = nullptr) {
  enum class Section { None, ObjSense, Rows, Columns, Rhs, Bounds, End };
  std::map<std::string, std::string> varBack, conBack;
  if (names) {
    for (const auto& [o, w] : names->variables) varBack.emplace(w, o);
    for (const auto& [o, w] : names->constraints) conBack.emplace(w, o);
  }
  auto vname = [&](const std::string& w) {
    auto it = varBack.find(w);
    return it == varBack.end() ? w : it->second;
  };
  auto cname = [&](const std::string& w) {
    auto it = conBack.find(w);
    return it == conBack.end() ? w : it->second;
  };

  MipModel m;
  bool maximize = false;
  std::string objRow;
  struct Row {
    std::string name;
    Sense sense;
    double rhs = 0.0;
    LinExpr expr;
  };
  std::vector<Row> rows;
  std::map<std::string, std::size_t> rowIndex;
  LinExpr obj;
  bool inInt = false;
  std::set<std::string> intCols;
  struct Col {
    std::string name;
    bool integer;
    double lo = 0.0, hi = kInf;
    bool sawBV = false;
  };
  std::vector<Col> cols;
  std::map<std::string, std::size_t> colIndex;

  Section sec = Section::None;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("MPS line " + std::to_string(lineNo) + ": " + what);
  };
  auto number = [&](std::string_view s) {
    auto v = parse_number(s);
    if (!v) fail("bad number '" + std::string(s) + "'");
    return *v;
  };
  auto col_of = [&](const std::string& w) {
    auto it = colIndex.find(w);
    if (it != colIndex.end()) return it->second;
    colIndex.emplace(w, cols.size());
    cols.push_back({w, inInt});
    return cols.size() - 1;
  };
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::string head(tok[0]);
      if (head == "NAME") {
        if (tok.size() > 1) m.name = std::string(tok[1]);
        continue;
      }
      if (head == "OBJSENSE") {
        sec = Section::ObjSense;
        if (tok.size() > 1) maximize = tok[1] == "MAX" || tok[1] == "MAXIMIZE";
        continue;
      }
      if (head == "ROWS") { sec = Section::Rows; continue; }
      if (head == "COLUMNS") { sec = Section::Columns; continue; }
      if (head == "RHS") { sec = Section::Rhs; continue; }
      if (head == "BOUNDS") { sec = Section::Bounds; continue; }
      if (head == "RANGES") fail("RANGES section is not supported");
      if (head == "ENDATA") { sec = Section::End; continue; }
      fail("unknown section '" + head + "'");
    }
    switch (sec) {
      case Section::ObjSense:
        maximize = tok[0] == "MAX" || tok[0] == "MAXIMIZE";
        break;
      case Section::Rows: {
        if (tok.size() != 2) fail("bad ROWS entry");
        const std::string type(tok[0]);
        const std::string name(tok[1]);
        if (type == "N") {
          if (objRow.empty()) objRow = name;
          break;
        }
        Sense s = type == "L" ? Sense::LessEqual : type == "G" ? Sense::GreaterEqual : Sense::Equal;
        if (type != "L" && type != "G" && type != "E") fail("bad row type '" + type + "'");
        rowIndex.emplace(name, rows.size());
        rows.push_back({name, s});
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") inInt = true;
          else if (tok[2] == "'INTEND'") inInt = false;
          else fail("bad marker");
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) fail("bad COLUMNS entry");
        const auto c = col_of(std::string(tok[0]));
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const std::string row(tok[k]);
          const double v = number(tok[k + 1]);
          if (row == objRow) {
            if (v != 0.0) obj.terms.push_back({c, v});
          } else {
            auto it = rowIndex.find(row);
            if (it == rowIndex.end()) fail("unknown row '" + row + "'");
            rows[it->second].expr.terms.push_back({c, v});
          }
        }
        break;
      }
      case Section::Rhs: {
        if (tok.size() != 3 && tok.size() != 5) fail("bad RHS entry");
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const std::string row(tok[k]);
          const double v = number(tok[k + 1]);
          if (row == objRow) {
            obj.constant = -v;
          } else {
            auto it = rowIndex.find(row);
            if (it == rowIndex.end()) fail("unknown row '" + row + "'");
            rows[it->second].rhs = v;
          }
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) fail("bad BOUNDS entry");
        const std::string type(tok[0]);
        auto it = colIndex.find(std::string(tok[2]));
        if (it == colIndex.end()) fail("bound on unknown column");
        Col& c = cols[it->second];
        const double v = tok.size() > 3 ? number(tok[3]) : 0.0;
        if (type == "UP") c.hi = v;
        else if (type == "LO") c.lo = v;
        else if (type == "FX") c.lo = c.hi = v;
        else if (type == "FR") { c.lo = -kInf; c.hi = kInf; }
        else if (type == "MI") c.lo = -kInf;
        else if (type == "PL") c.hi = kInf;
        else if (type == "BV") { c.lo = 0.0; c.hi = 1.0; c.integer = true; c.sawBV = true; }
        else fail("unsupported bound type '" + type + "'");
        break;
      }
      case Section::None:
      case Section::End: fail("data outside a section");
    }
  }
  if (sec != Section::End) throw ParseError("MPS: missing ENDATA");

  for (const auto& c : cols) {
    if (c.integer && (c.lo < 0.0 || c.hi > 1.0)) {
      throw ParseError("MPS: integer column '" + c.name + "' is not binary");
    }
    m.add_var(vname(c.name), c.integer ? VarKind::Binary : VarKind::Continuous, c.lo, c.hi);
  }
  m.set_objective(obj, maximize);
  for (const auto& r : rows) m.add_constraint(cname(r.name), r.expr, r.sense, LinExpr(r.rhs));
  return m;
}

inline MipModel read_mps(const std::string& path, const NameMap* names = nullptr) {
  return parse_mps(read_text_file(path), names);
}

}  // namespace blockbid::mip
