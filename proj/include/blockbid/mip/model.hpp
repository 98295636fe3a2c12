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

// Solver-independent mixed-integer model and the logical-to-linear gadgets
// (conjunction, disjunction, negation by substitution, big-M conditional
// equality) used to encode order-status logic.

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "blockbid/errors.hpp"

namespace blockbid::mip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using VarId = std::size_t;
using ConId = std::size_t;

enum class VarKind { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Term {
  VarId var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  // Role of the row in the formulation, e.g. "pwl.piece_select".
  std::string tag;
};

struct Objective {
  bool maximize = true;
  std::vector<Term> terms;
  double constant = 0.0;
};

// Affine expression sum(coef * var) + constant.
struct LinExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT: implicit by design of the builder API
  static LinExpr var(VarId v, double coef = 1.0) {
    LinExpr e;
    e.terms.push_back({v, coef});
    return e;
  }

  LinExpr& operator+=(const LinExpr& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    constant += o.constant;
    return *this;
  }
  LinExpr& operator-=(const LinExpr& o) { return *this += o * -1.0; }
  LinExpr& operator*=(double k) {
    for (auto& t : terms) t.coef *= k;
    constant *= k;
    return *this;
  }
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, double k) { return a *= k; }
  friend LinExpr operator*(double k, LinExpr a) { return a *= k; }
};

// A 0/1 operand of a logical gadget: a variable, its negation 1 - x, or a
// constant.
struct Lit {
  std::optional<VarId> var;
  bool negated = false;
  int value = 0;

  static Lit of(VarId v) { return {v, false, 0}; }
  static Lit constant(int v) { return {std::nullopt, false, v}; }

  LinExpr expr() const {
    if (!var) return LinExpr(static_cast<double>(value));
    if (negated) return LinExpr(1.0) - LinExpr::var(*var);
    return LinExpr::var(*var);
  }
};

inline Lit operator!(Lit l) {
  if (!l.var) return Lit::constant(1 - l.value);
  l.negated = !l.negated;
  return l;
}

class MipModel {
 public:
  std::string name = "blockbid";

  VarId add_var(std::string varName, VarKind kind, double lower, double upper) {
    if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0)) {
      throw DomainError("binary '" + varName + "' bounds must lie in [0, 1]");
    }
    if (lower > upper) throw DomainError("variable '" + varName + "' has lower > upper");
    if (varIndex_.count(varName)) throw DomainError("duplicate variable name '" + varName + "'");
    varIndex_.emplace(varName, vars_.size());
    vars_.push_back({std::move(varName), kind, lower, upper});
    priority_.push_back(0);
    return vars_.size() - 1;
  }
  VarId add_continuous(std::string varName, double lower, double upper) {
    return add_var(std::move(varName), VarKind::Continuous, lower, upper);
  }
  VarId add_binary(std::string varName, double lower = 0.0, double upper = 1.0) {
    return add_var(std::move(varName), VarKind::Binary, lower, upper);
  }

  // Adds `lhs sense rhs` with every variable moved left and duplicate terms
  // merged. Returns nullopt when the row has no variables left (it is then
  // checked for consistency and dropped).
  std::optional<ConId> add_constraint(std::string conName, const LinExpr& lhs, Sense sense,
                                      const LinExpr& rhs, std::string tag = {}) {
    LinExpr diff = lhs - rhs;
    std::map<VarId, double> merged;
    for (const auto& t : diff.terms) {
      check_var(t.var);
      merged[t.var] += t.coef;
    }
    Constraint c;
    c.sense = sense;
    c.rhs = -diff.constant;
    c.tag = std::move(tag);
    for (const auto& [v, coef] : merged) {
      if (coef != 0.0) c.terms.push_back({v, coef});
    }
    if (c.terms.empty()) {
      const bool holds = sense == Sense::LessEqual      ? 0.0 <= c.rhs + 1e-12
                         : sense == Sense::GreaterEqual ? 0.0 >= c.rhs - 1e-12
                                                        : std::abs(c.rhs) <= 1e-12;
      if (!holds) throw DomainError("constraint '" + conName + "' is a false constant statement");
      return std::nullopt;
    }
    if (conIndex_.count(conName)) throw DomainError("duplicate constraint name '" + conName + "'");
    c.name = std::move(conName);
    conIndex_.emplace(c.name, cons_.size());
    cons_.push_back(std::move(c));
    return cons_.size() - 1;
  }

  void set_objective(const LinExpr& expr, bool maximize = true) {
    std::map<VarId, double> merged;
    for (const auto& t : expr.terms) {
      check_var(t.var);
      merged[t.var] += t.coef;
    }
    obj_ = {};
    obj_.maximize = maximize;
    obj_.constant = expr.constant;
    for (const auto& [v, coef] : merged) {
      if (coef != 0.0) obj_.terms.push_back({v, coef});
    }
  }

  void set_bounds(VarId v, double lower, double upper) {
    check_var(v);
    vars_[v].lower = lower;
    vars_[v].upper = upper;
  }

  // Branching hint: fractional binaries of higher priority are branched on
  // first. Not part of the exported model.
  void set_branch_priority(VarId v, int priority) {
    check_var(v);
    priority_[v] = priority;
  }
  int branch_priority(VarId v) const { return priority_.at(v); }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const Objective& objective() const { return obj_; }
  const Variable& var(VarId v) const { return vars_.at(v); }
  const Constraint& constraint(ConId c) const { return cons_.at(c); }
  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_constraints() const { return cons_.size(); }

  std::size_t num_binaries() const {
    std::size_t n = 0;
    for (const auto& v : vars_) n += v.kind == VarKind::Binary;
    return n;
  }

  std::optional<VarId> find_var(const std::string& varName) const {
    auto it = varIndex_.find(varName);
    if (it == varIndex_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<ConId> find_constraint(const std::string& conName) const {
    auto it = conIndex_.find(conName);
    if (it == conIndex_.end()) return std::nullopt;
    return it->second;
  }

  // Constraint name -> formulation tag, for rows that carry one.
  std::map<std::string, std::string> metadata() const {
    std::map<std::string, std::string> out;
    for (const auto& c : cons_) {
      if (!c.tag.empty()) out.emplace(c.name, c.tag);
    }
    return out;
  }

  double objective_value(const std::vector<double>& x) const {
    double v = obj_.constant;
    for (const auto& t : obj_.terms) v += t.coef * x.at(t.var);
    return v;
  }

  double activity(ConId c, const std::vector<double>& x) const {
    double a = 0.0;
    for (const auto& t : cons_.at(c).terms) a += t.coef * x.at(t.var);
    return a;
  }

  ValidationReport validate() const {
    ValidationReport rep;
    for (const auto& v : vars_) {
      if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
        rep.add("binary bounds outside [0,1]", v.name);
      }
      if (v.lower > v.upper) rep.add("empty bound interval", v.name);
      if (std::isnan(v.lower) || std::isnan(v.upper)) rep.add("NaN bound", v.name);
    }
    for (const auto& c : cons_) {
      for (const auto& t : c.terms) {
        if (t.var >= vars_.size()) rep.add("undeclared variable", c.name);
        if (!std::isfinite(t.coef)) rep.add("non-finite coefficient", c.name);
      }
      if (!std::isfinite(c.rhs)) rep.add("non-finite right-hand side", c.name);
    }
    return rep;
  }

 private:
  void check_var(VarId v) const {
    if (v >= vars_.size()) {
      throw DomainError("undeclared variable index " + std::to_string(v));
    }
  }

  std::vector<Variable> vars_;
  std::vector<int> priority_;
  std::vector<Constraint> cons_;
  Objective obj_;
  std::unordered_map<std::string, VarId> varIndex_;
  std::unordered_map<std::string, ConId> conIndex_;
};

using Handles = std::vector<ConId>;

namespace detail {
inline void push(Handles& h, std::optional<ConId> c) {
  if (c) h.push_back(*c);
}
inline void check_lit(const MipModel& m, const Lit& l) {
  if (l.var && *l.var >= m.num_vars()) {
    throw DomainError("gadget references undeclared variable " + std::to_string(*l.var));
  }
}
}  // namespace detail

// z = x AND y:  z <= x,  z <= y,  z >= x + y - 1.
inline Handles add_and(MipModel& m, const std::string& name, Lit z, Lit x, Lit y,
                       const std::string& tag = "logic.and") {
  detail::check_lit(m, z);
  detail::check_lit(m, x);
  detail::check_lit(m, y);
  Handles h;
  detail::push(h, m.add_constraint(name + "_a", z.expr(), Sense::LessEqual, x.expr(), tag));
  detail::push(h, m.add_constraint(name + "_b", z.expr(), Sense::LessEqual, y.expr(), tag));
  detail::push(h, m.add_constraint(name + "_c", z.expr(), Sense::GreaterEqual,
                                   x.expr() + y.expr() - LinExpr(1.0), tag));
  return h;
}

// z = x OR y:  z >= x,  z >= y,  z <= x + y.
inline Handles add_or(MipModel& m, const std::string& name, Lit z, Lit x, Lit y,
                      const std::string& tag = "logic.or") {
  detail::check_lit(m, z);
  detail::check_lit(m, x);
  detail::check_lit(m, y);
  Handles h;
  detail::push(h, m.add_constraint(name + "_a", z.expr(), Sense::GreaterEqual, x.expr(), tag));
  detail::push(h, m.add_constraint(name + "_b", z.expr(), Sense::GreaterEqual, y.expr(), tag));
  detail::push(h, m.add_constraint(name + "_c", z.expr(), Sense::LessEqual,
                                   x.expr() + y.expr(), tag));
  return h;
}

// Negation needs no row: NOT x enters other rows as the expression 1 - x.
inline Lit add_not_pair(const MipModel& m, VarId x) {
  detail::check_lit(m, Lit::of(x));
  return !Lit::of(x);
}

// flagPlus = 1 forces a <= b and flagMinus = 1 forces b <= a; with both set,
// a = b. Equality never forces the flags.
//   a - b <= M (1 - flagPlus),   b - a <= M (1 - flagMinus)
inline Handles add_bigM_equal_if(MipModel& m, const std::string& name, const LinExpr& a,
                                 const LinExpr& b, VarId flagPlus, VarId flagMinus, double bigM,
                                 const std::string& tag = "logic.equal_if") {
  if (!(bigM > 0.0)) throw DomainError("big-M constant must be positive");
  detail::check_lit(m, Lit::of(flagPlus));
  detail::check_lit(m, Lit::of(flagMinus));
  Handles h;
  detail::push(h, m.add_constraint(name + "_plus", a - b + LinExpr::var(flagPlus, bigM),
                                   Sense::LessEqual, LinExpr(bigM), tag));
  detail::push(h, m.add_constraint(name + "_minus", b - a + LinExpr::var(flagMinus, bigM),
                                   Sense::LessEqual, LinExpr(bigM), tag));
  return h;
}

// Checks every constraint and bound at `x` within `tol`; returns the first
// violated row or variable name.
inline std::optional<std::string> first_violation(const MipModel& m, const std::vector<double>& x,
                                                  double tol) {
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    const auto& var = m.var(v);
    if (x[v] < var.lower - tol || x[v] > var.upper + tol) return var.name;
  }
  for (std::size_t c = 0; c < m.num_constraints(); ++c) {
    const auto& con = m.constraint(c);
    const double a = m.activity(c, x);
    const double scale = 1.0 + std::abs(con.rhs);
    const bool ok = con.sense == Sense::LessEqual      ? a <= con.rhs + tol * scale
                    : con.sense == Sense::GreaterEqual ? a >= con.rhs - tol * scale
                                                       : std::abs(a - con.rhs) <= tol * scale;
    if (!ok) return con.name;
  }
  return std::nullopt;
}

}  // namespace blockbid::mip
