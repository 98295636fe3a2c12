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

// CPLEX-style LP text format: Maximize/Minimize, Subject To, Bounds, Binary,
// End. Output is byte-stable: variables and rows in declaration order,
// shortest round-trip numbers, LF line endings.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "blockbid/errors.hpp"
#include "blockbid/mip/format.hpp"
#include "blockbid/mip/model.hpp"

namespace blockbid::mip {

inline constexpr std::size_t kLpMaxNameLength = 255;

inline bool valid_lp_name(std::string_view n) {
  if (n.empty() || n.size() > kLpMaxNameLength) return false;
  const unsigned char first = static_cast<unsigned char>(n.front());
  if (!(std::isalpha(first) || first == '_')) return false;
  if (n == "inf" || n == "infinity" || n == "free") return false;
  if ((first == 'e' || first == 'E') && n.size() > 1 &&
      std::isdigit(static_cast<unsigned char>(n[1]))) {
    return false;
  }
  for (char c : n) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '.' || c == '[' || c == ']')) return false;
  }
  return true;
}

namespace detail {

template <class Names, class Valid>
std::vector<std::string> assign_names(const Names& originals, char prefix, Valid valid,
                                      std::map<std::string, std::string>& renamed) {
  std::set<std::string> taken;
  for (const auto& n : originals) {
    if (valid(n)) taken.insert(n);
  }
  std::vector<std::string> out;
  out.reserve(originals.size());
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const auto& n = originals[i];
    if (valid(n)) {
      out.push_back(n);
      continue;
    }
    std::string candidate = std::string("_") + prefix + std::to_string(i + 1);
    while (taken.count(candidate)) candidate += "_";
    taken.insert(candidate);
    renamed.emplace(n, candidate);
    out.push_back(candidate);
  }
  return out;
}

class LineWrapper {
 public:
  explicit LineWrapper(std::ostringstream& os) : os_(os) {}
  void put(const std::string& piece) {
    if (width_ + piece.size() > 200) {
      os_ << "\n ";
      width_ = 1;
    }
    os_ << piece;
    width_ += piece.size();
  }
  void start(const std::string& piece) {
    os_ << piece;
    width_ = piece.size();
  }

 private:
  std::ostringstream& os_;
  std::size_t width_ = 0;
};

// Comment line that ends a run of tagged rows.
inline constexpr const char* kUntagged = "(untagged)";

inline std::string signed_term(double coef, const std::string& name) {
  return (coef < 0 ? " - " : " + ") + format_number(std::abs(coef)) + " " + name;
}

}  // namespace detail

// Renders `m` as LP text. Names the format cannot carry are replaced and
// recorded in `renamed` (when non-null).
inline std::string to_lp_string(const MipModel& m, NameMap* renamed = nullptr) {
  NameMap local;
  std::vector<std::string> varNames, conNames;
  for (const auto& v : m.variables()) varNames.push_back(v.name);
  for (const auto& c : m.constraints()) conNames.push_back(c.name);
  auto valid = [](const std::string& n) { return valid_lp_name(n); };
  const auto vn = detail::assign_names(varNames, 'x', valid, local.variables);
  const auto cn = detail::assign_names(conNames, 'c', valid, local.constraints);

  std::ostringstream os;
  os << "\\ Problem: " << m.name << '\n';
  os << (m.objective().maximize ? "Maximize\n" : "Minimize\n");
  detail::LineWrapper w(os);
  w.start(" obj:");
  for (const auto& t : m.objective().terms) w.put(detail::signed_term(t.coef, vn[t.var]));
  if (m.objective().constant != 0.0) {
    const double c = m.objective().constant;
    w.put((c < 0 ? " - " : " + ") + format_number(std::abs(c)));
  }
  os << "\nSubject To\n";
  std::string lastTag;
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    const auto& c = m.constraint(i);
    if (c.tag != lastTag) {
      os << "\\ " << (c.tag.empty() ? detail::kUntagged : c.tag) << '\n';
      lastTag = c.tag;
    }
    w.start(" " + cn[i] + ":");
    for (const auto& t : c.terms) w.put(detail::signed_term(t.coef, vn[t.var]));
    const char* sense = c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::Equal ? " = " : " >= ";
    w.put(sense + format_number(c.rhs));
    os << '\n';
  }
  os << "Bounds\n";
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    const auto& var = m.var(v);
    if (var.kind == VarKind::Binary && var.lower == 0.0 && var.upper == 1.0) continue;
    if (var.lower == var.upper) {
      os << ' ' << vn[v] << " = " << format_number(var.lower) << '\n';
    } else if (std::isinf(var.lower) && std::isinf(var.upper)) {
      os << ' ' << vn[v] << " free\n";
    } else {
      os << ' ' << format_number(var.lower) << " <= " << vn[v] << " <= "
         << format_number(var.upper) << '\n';
    }
  }
  bool anyBinary = false;
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    if (m.var(v).kind != VarKind::Binary) continue;
    if (!anyBinary) os << "Binary\n";
    anyBinary = true;
    os << ' ' << vn[v] << '\n';
  }
  os << "End\n";
  if (renamed) *renamed = std::move(local);
  return os.str();
}

// Writes the LP file; when names had to be replaced, also writes
// `<path>.names` with the mapping and returns it.
inline NameMap write_lp(const MipModel& m, const std::string& path) {
  NameMap renamed;
  write_text_file(path, to_lp_string(m, &renamed));
  if (!renamed.empty()) {
    std::ostringstream os;
    renamed.write(os);
    write_text_file(path + ".names", os.str());
  }
  return renamed;
}

namespace detail {

struct LpToken {
  enum Kind { Name, Number, Op, Colon } kind;
  std::string text;
  double value = 0.0;
};

inline std::vector<LpToken> lex_lp(std::string_view s, std::size_t lineNo) {
  std::vector<LpToken> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("LP line " + std::to_string(lineNo) + ": " + what);
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ':') {
      out.push_back({LpToken::Colon, ":"});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      ++i;
      if (i < s.size() && s[i] == '=') {
        ++i;
        if (c == '=') op = "=";
        else op += '=';
      } else if (c != '=') {
        op += '=';
      }
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      out.push_back({LpToken::Op, op});
    } else if (c == '+' || c == '-') {
      out.push_back({LpToken::Op, std::string(1, c)});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
      }
      auto v = parse_number(s.substr(i, j - i));
      if (!v) fail("bad number '" + std::string(s.substr(i, j - i)) + "'");
      out.push_back({LpToken::Number, std::string(s.substr(i, j - i)), *v});
      i = j;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ':' &&
             s[j] != '<' && s[j] != '>' && s[j] != '=' && s[j] != '+' && s[j] != '-') {
        ++j;
      }
      std::string name(s.substr(i, j - i));
      std::string lower = name;
      for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (lower == "inf" || lower == "infinity") {
        out.push_back({LpToken::Number, name, std::numeric_limits<double>::infinity()});
      } else {
        out.push_back({LpToken::Name, name});
      }
      i = j;
    }
  }
  return out;
}

}  // namespace detail

// Parses the LP dialect written by to_lp_string (plus the common keyword
// spellings). Variables are declared in order of first appearance.
inline MipModel parse_lp(const std::string& text) {
  enum class Section { None, Objective, Constraints, Bounds, Binary, End };
  MipModel m;
  Section sec = Section::None;
  bool maximize = true;
  std::vector<detail::LpToken> objTokens, conTokens;
  // Tag in effect for each constraint token; a whole-line comment inside
  // Subject To names the tag of the rows that follow.
  std::vector<std::string> conTags;
  std::string currentTag;
  struct BoundLine {
    std::vector<detail::LpToken> toks;
    std::size_t line;
  };
  std::vector<BoundLine> boundLines;
  std::vector<std::string> binaries;

  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto p = line.find('\\'); p != std::string::npos) {
      if (p == 0 && line.rfind("\\ Problem: ", 0) == 0) m.name = line.substr(11);
      if (p == 0 && sec == Section::Constraints && line.rfind("\\ ", 0) == 0) {
        currentTag = line.substr(2);
        if (currentTag == detail::kUntagged) currentTag.clear();
      }
      line.erase(p);
    }
    std::string key;
    for (char c : line) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    std::size_t lead = 0;
    while (lead < key.size() && std::isspace(static_cast<unsigned char>(key[lead]))) ++lead;
    key = key.substr(lead);
    if (key.empty()) continue;
    if (key == "maximize" || key == "maximum" || key == "max") {
      sec = Section::Objective;
      maximize = true;
      continue;
    }
    if (key == "minimize" || key == "minimum" || key == "min") {
      sec = Section::Objective;
      maximize = false;
      continue;
    }
    if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
      sec = Section::Constraints;
      continue;
    }
    if (key == "bounds" || key == "bound") {
      sec = Section::Bounds;
      continue;
    }
    if (key == "binary" || key == "binaries" || key == "bin") {
      sec = Section::Binary;
      continue;
    }
    if (key == "general" || key == "generals" || key == "gen" || key == "semi-continuous") {
      throw ParseError("LP line " + std::to_string(lineNo) + ": unsupported section '" + key + "'");
    }
    if (key == "end") {
      sec = Section::End;
      continue;
    }
    auto toks = detail::lex_lp(line, lineNo);
    switch (sec) {
      case Section::Objective: objTokens.insert(objTokens.end(), toks.begin(), toks.end()); break;
      case Section::Constraints:
        conTokens.insert(conTokens.end(), toks.begin(), toks.end());
        conTags.resize(conTokens.size(), currentTag);
        break;
      case Section::Bounds: boundLines.push_back({toks, lineNo}); break;
      case Section::Binary:
        for (const auto& t : toks) binaries.push_back(t.text);
        break;
      case Section::None:
      case Section::End: throw ParseError("LP line " + std::to_string(lineNo) + ": text outside a section");
    }
  }

  std::set<std::string> binarySet(binaries.begin(), binaries.end());
  auto var_of = [&](const std::string& name) {
    if (auto v = m.find_var(name)) return *v;
    if (binarySet.count(name)) return m.add_binary(name);
    return m.add_continuous(name, 0.0, kInf);
  };

  // Reads "[sign] [coef] name | [sign] number" terms from toks[i] until a
  // sense operator or end; returns the affine expression.
  auto read_expr = [&](const std::vector<detail::LpToken>& toks, std::size_t& i) {
    LinExpr e;
    while (i < toks.size()) {
      const auto& t = toks[i];
      if (t.kind == detail::LpToken::Op && (t.text == "<=" || t.text == ">=" || t.text == "=")) break;
      if (t.kind == detail::LpToken::Name && i + 1 < toks.size() &&
          toks[i + 1].kind == detail::LpToken::Colon) {
        break;
      }
      double sign = 1.0;
      while (i < toks.size() && toks[i].kind == detail::LpToken::Op &&
             (toks[i].text == "+" || toks[i].text == "-")) {
        if (toks[i].text == "-") sign = -sign;
        ++i;
      }
      if (i >= toks.size()) throw ParseError("LP: dangling sign");
      if (toks[i].kind == detail::LpToken::Number) {
        const double v = toks[i].value;
        ++i;
        if (i < toks.size() && toks[i].kind == detail::LpToken::Name &&
            !(i + 1 < toks.size() && toks[i + 1].kind == detail::LpToken::Colon)) {
          e.terms.push_back({var_of(toks[i].text), sign * v});
          ++i;
        } else {
          e.constant += sign * v;
        }
      } else if (toks[i].kind == detail::LpToken::Name) {
        e.terms.push_back({var_of(toks[i].text), sign});
        ++i;
      } else {
        throw ParseError("LP: unexpected token '" + toks[i].text + "'");
      }
    }
    return e;
  };

  std::size_t i = 0;
  if (i + 1 < objTokens.size() && objTokens[i].kind == detail::LpToken::Name &&
      objTokens[i + 1].kind == detail::LpToken::Colon) {
    i += 2;
  }
  LinExpr objExpr = read_expr(objTokens, i);
  if (i != objTokens.size()) throw ParseError("LP: trailing tokens in objective");

  struct PendingRow {
    std::string name;
    LinExpr lhs;
    Sense sense;
    double rhs;
    std::string tag;
  };
  std::vector<PendingRow> rows;
  i = 0;
  std::size_t anon = 0;
  while (i < conTokens.size()) {
    const std::string tag = conTags[i];
    std::string name;
    if (conTokens[i].kind == detail::LpToken::Name && i + 1 < conTokens.size() &&
        conTokens[i + 1].kind == detail::LpToken::Colon) {
      name = conTokens[i].text;
      i += 2;
    } else {
      name = "R" + std::to_string(++anon);
    }
    LinExpr lhs = read_expr(conTokens, i);
    if (i >= conTokens.size() || conTokens[i].kind != detail::LpToken::Op) {
      throw ParseError("LP: constraint '" + name + "' has no sense");
    }
    const std::string op = conTokens[i++].text;
    double sign = 1.0;
    while (i < conTokens.size() && conTokens[i].kind == detail::LpToken::Op &&
           (conTokens[i].text == "+" || conTokens[i].text == "-")) {
      if (conTokens[i].text == "-") sign = -sign;
      ++i;
    }
    if (i >= conTokens.size() || conTokens[i].kind != detail::LpToken::Number) {
      throw ParseError("LP: constraint '" + name + "' has no numeric right-hand side");
    }
    const double rhs = sign * conTokens[i++].value;
    rows.push_back({name, lhs, op == "<=" ? Sense::LessEqual : op == ">=" ? Sense::GreaterEqual : Sense::Equal,
                    rhs - lhs.constant, tag});
  }

  for (const auto& b : boundLines) {
    const auto& t = b.toks;
    auto fail = [&] { throw ParseError("LP line " + std::to_string(b.line) + ": bad bound"); };
    auto num = [&](std::size_t k, double& out) {
      double sign = 1.0;
      while (k < t.size() && t[k].kind == detail::LpToken::Op && (t[k].text == "+" || t[k].text == "-")) {
        if (t[k].text == "-") sign = -sign;
        ++k;
      }
      if (k >= t.size() || t[k].kind != detail::LpToken::Number) fail();
      out = sign * t[k].value;
      return k + 1;
    };
    if (t.size() == 2 && t[0].kind == detail::LpToken::Name && t[1].kind == detail::LpToken::Name) {
      if (t[1].text != "free" && t[1].text != "Free" && t[1].text != "FREE") fail();
      const auto v = var_of(t[0].text);
      m.set_bounds(v, -kInf, kInf);
      continue;
    }
    if (!t.empty() && t[0].kind == detail::LpToken::Name) {
      // name op value
      if (t.size() < 3 || t[1].kind != detail::LpToken::Op) fail();
      double val = 0.0;
      if (num(2, val) != t.size()) fail();
      const auto v = var_of(t[0].text);
      const auto& var = m.var(v);
      if (t[1].text == "=") m.set_bounds(v, val, val);
      else if (t[1].text == "<=") m.set_bounds(v, var.lower, val);
      else m.set_bounds(v, val, var.upper);
      continue;
    }
    // lo <= name <= hi
    double lo = 0.0, hi = 0.0;
    std::size_t k = num(0, lo);
    if (k >= t.size() || t[k].kind != detail::LpToken::Op || t[k].text != "<=") fail();
    ++k;
    if (k >= t.size() || t[k].kind != detail::LpToken::Name) fail();
    const auto v = var_of(t[k].text);
    ++k;
    if (k == t.size()) {
      m.set_bounds(v, lo, m.var(v).upper);
      continue;
    }
    if (t[k].kind != detail::LpToken::Op || t[k].text != "<=") fail();
    if (num(k + 1, hi) != t.size()) fail();
    m.set_bounds(v, lo, hi);
  }
  for (const auto& name : binaries) var_of(name);

  m.set_objective(objExpr, maximize);
  for (auto& r : rows) {
    LinExpr lhs = r.lhs;
    lhs.constant = 0.0;
    m.add_constraint(r.name, lhs, r.sense, LinExpr(r.rhs), r.tag);
  }
  return m;
}

inline MipModel read_lp(const std::string& path) { return parse_lp(read_text_file(path)); }

// Same names, kinds, bounds, rows (sense, rhs, coefficients by variable
// name) and objective. Variable and row order are ignored.
inline bool structurally_equal(const MipModel& a, const MipModel& b, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.num_vars() != b.num_vars()) return fail("variable count");
  if (a.num_constraints() != b.num_constraints()) return fail("constraint count");
  for (const auto& va : a.variables()) {
    auto id = b.find_var(va.name);
    if (!id) return fail("missing variable " + va.name);
    const auto& vb = b.var(*id);
    if (va.kind != vb.kind || va.lower != vb.lower || va.upper != vb.upper) {
      return fail("variable " + va.name + " differs");
    }
  }
  auto term_map = [](const MipModel& m, const std::vector<Term>& terms) {
    std::map<std::string, double> out;
    for (const auto& t : terms) out[m.var(t.var).name] += t.coef;
    return out;
  };
  for (const auto& ca : a.constraints()) {
    auto id = b.find_constraint(ca.name);
    if (!id) return fail("missing constraint " + ca.name);
    const auto& cb = b.constraint(*id);
    if (ca.sense != cb.sense || ca.rhs != cb.rhs) return fail("constraint " + ca.name + " differs");
    if (term_map(a, ca.terms) != term_map(b, cb.terms)) {
      return fail("constraint " + ca.name + " coefficients differ");
    }
  }
  if (a.objective().maximize != b.objective().maximize ||
      a.objective().constant != b.objective().constant ||
      term_map(a, a.objective().terms) != term_map(b, b.objective().terms)) {
    return fail("objective differs");
  }
  return true;
}

}  // namespace blockbid::mip
