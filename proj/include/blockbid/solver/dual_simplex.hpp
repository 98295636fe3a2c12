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

// Dense bounded dual simplex.
//
// The LP is   min c'x   s.t.   A x - s = 0,   l <= (x, s) <= u
// where s are row activities. Every variable, including each row activity,
// carries finite bounds (infinite row bounds are replaced by the activity
// range implied by the column bounds), so any basis can be made dual feasible
// by moving each nonbasic variable to the bound its reduced cost prefers. This
// lets branch-and-bound change bounds and simply continue from the current
// basis.
//
// The basis inverse is kept explicitly (m x m, row-major) and updated by
// Gauss-Jordan pivots; it is rebuilt from scratch every `refactorEvery`
// updates. Leaving rows are chosen by largest infeasibility, entering columns
// by a two-pass Harris ratio test. After 10 (m + n) consecutive degenerate
// pivots the solver switches to Bland's smallest-index rule until it makes
// progress again.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blockbid/errors.hpp"
#include "blockbid/mip/model.hpp"

namespace blockbid::solver {

using Clock = std::chrono::steady_clock;

// Column-major sparse matrix.
struct SparseColumns {
  std::vector<std::size_t> start{0};
  std::vector<std::size_t> index;
  std::vector<double> value;

  std::size_t cols() const { return start.size() - 1; }
};

// LP data in minimization form. Bounds vectors hold n structural entries
// followed by m row-activity entries.
struct LpData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  SparseColumns matrix;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  double objSign = 1.0;  // original objective = objSign * (cost'x) + objConstant
  double objConstant = 0.0;
};

// Converts a model to minimization form. Throws when a column bound is
// infinite; row bounds are clamped to the activity range the columns allow.
inline LpData make_lp(const mip::MipModel& model) {
  LpData lp;
  lp.rows = model.num_constraints();
  lp.cols = model.num_vars();
  lp.objSign = model.objective().maximize ? -1.0 : 1.0;
  lp.objConstant = model.objective().constant;
  lp.cost.assign(lp.cols, 0.0);
  for (const auto& t : model.objective().terms) lp.cost[t.var] += lp.objSign * t.coef;
  lp.lower.resize(lp.cols + lp.rows);
  lp.upper.resize(lp.cols + lp.rows);
  for (std::size_t j = 0; j < lp.cols; ++j) {
    const auto& v = model.var(j);
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw DomainError("variable '" + v.name + "' is unbounded; the solver needs finite bounds");
    }
    lp.lower[j] = v.lower;
    lp.upper[j] = v.upper;
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(lp.cols);
  for (std::size_t i = 0; i < lp.rows; ++i) {
    const auto& c = model.constraint(i);
    double actLo = 0.0, actHi = 0.0;
    for (const auto& t : c.terms) {
      cols[t.var].emplace_back(i, t.coef);
      const double a = t.coef * lp.lower[t.var];
      const double b = t.coef * lp.upper[t.var];
      actLo += std::min(a, b);
      actHi += std::max(a, b);
    }
    const double slackMargin = 1.0 + 1e-6 * (std::abs(actLo) + std::abs(actHi));
    double lo = c.sense == mip::Sense::LessEqual ? -mip::kInf : c.rhs;
    double hi = c.sense == mip::Sense::GreaterEqual ? mip::kInf : c.rhs;
    if (std::isinf(lo)) lo = std::min(actLo - slackMargin, hi);
    if (std::isinf(hi)) hi = std::max(actHi + slackMargin, lo);
    lp.lower[lp.cols + i] = lo;
    lp.upper[lp.cols + i] = hi;
  }
  for (std::size_t j = 0; j < lp.cols; ++j) {
    for (const auto& [i, v] : cols[j]) {
      lp.matrix.index.push_back(i);
      lp.matrix.value.push_back(v);
    }
    lp.matrix.start.push_back(lp.matrix.index.size());
  }
  return lp;
}

enum class LpStatus { Optimal, Infeasible, Cutoff, TimeLimit, IterationLimit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Cutoff: return "cutoff";
    case LpStatus::TimeLimit: return "time_limit";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  // Minimization-form objective c'x (a valid lower bound while dual feasible).
  double value = 0.0;
  std::size_t iterations = 0;
  // For Infeasible: index (n + m space) of the variable whose row proved it.
  std::optional<std::size_t> infeasibleVar;
};

class DualSimplex {
 public:
  struct Options {
    double primalTol = 1e-9;
    double dualTol = 1e-9;
    double pivotTol = 1e-9;
    std::size_t refactorEvery = 100;
  };

  explicit DualSimplex(LpData lp) : DualSimplex(std::move(lp), Options{}) {}
  DualSimplex(LpData lp, Options opt)
      : lp_(std::move(lp)), opt_(opt), m_(lp_.rows), n_(lp_.cols) {
    const std::size_t total = n_ + m_;
    lo_ = lp_.lower;
    up_ = lp_.upper;
    cost_.assign(total, 0.0);
    std::copy(lp_.cost.begin(), lp_.cost.end(), cost_.begin());
    x_.assign(total, 0.0);
    d_ = cost_;
    status_.assign(total, Status::AtLower);
    pos_.assign(total, kNotBasic);
    head_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      status_[n_ + i] = Status::Basic;
      pos_[n_ + i] = i;
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = -1.0;
    ratio_.reserve(total);
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  const LpData& data() const { return lp_; }

  void set_bounds(std::size_t j, double lo, double hi) {
    lo_[j] = lo;
    up_[j] = hi;
  }
  double lower(std::size_t j) const { return lo_[j]; }
  double upper(std::size_t j) const { return up_[j]; }
  void reset_bounds() {
    lo_ = lp_.lower;
    up_ = lp_.upper;
  }

  // Structural primal values of the last solve.
  std::vector<double> primal() const { return {x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_)}; }
  double value(std::size_t j) const { return x_[j]; }
  double reduced_cost(std::size_t j) const { return d_[j]; }

  // Original-sense objective of the current primal point.
  double objective() const {
    double z = 0.0;
    for (std::size_t j = 0; j < n_; ++j) z += cost_[j] * x_[j];
    return lp_.objSign * z + lp_.objConstant;
  }

  std::size_t total_iterations() const { return totalIterations_; }

  // Runs dual simplex iterations from the current basis. Stops early with
  // Cutoff once the (min-form) objective provably exceeds `cutoff`.
  LpResult solve(std::optional<Clock::time_point> deadline = std::nullopt,
                 double cutoff = std::numeric_limits<double>::infinity()) {
    LpResult res;
    const std::size_t maxIter = 50 * (m_ + n_) + 1000;
    if (!factored_) rebuild();
    else shift_nonbasics();
    std::size_t degenerate = 0;
    bool bland = false;
    bool verified = false;
    for (;;) {
      if (deadline && (res.iterations & 15) == 0 && Clock::now() >= *deadline) {
        res.status = LpStatus::TimeLimit;
        break;
      }
      if (res.iterations >= maxIter) {
        res.status = LpStatus::IterationLimit;
        break;
      }
      if (cutoff < std::numeric_limits<double>::infinity() && (res.iterations & 7) == 0) {
        if (min_objective() > cutoff + 1e-9 * (1.0 + std::abs(cutoff))) {
          res.status = LpStatus::Cutoff;
          break;
        }
      }
      const auto leave = choose_leaving(bland);
      if (!leave) {
        if (!verified && updates_ > opt_.refactorEvery / 2) {
          // Confirm optimality on a fresh factorization once the inverse has
          // absorbed enough updates to drift.
          rebuild();
          verified = true;
          continue;
        }
        res.status = LpStatus::Optimal;
        break;
      }
      verified = false;
      const std::size_t r = *leave;
      const std::size_t leavingVar = head_[r];
      const double xr = x_[leavingVar];
      const bool toLower = xr < lo_[leavingVar];
      const double target = toLower ? lo_[leavingVar] : up_[leavingVar];

      compute_pivot_row(r);
      const auto enter = choose_entering(toLower, bland);
      if (!enter) {
        res.status = LpStatus::Infeasible;
        res.infeasibleVar = leavingVar;
        break;
      }
      const std::size_t q = *enter;
      const double alphaQ = alpha_[q];
      const double thetaD = d_[q] / alphaQ;

      if (std::abs(thetaD) <= 1e-12) {
        if (++degenerate > 10 * (m_ + n_)) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }

      // Dual update.
      for (std::size_t j : nonbasicNz_) d_[j] -= thetaD * alpha_[j];
      d_[q] = 0.0;
      d_[leavingVar] = -thetaD;

      // Primal update.
      compute_column(q);
      const double delta = (xr - target) / alphaQ;
      x_[q] += delta;
      for (std::size_t p = 0; p < m_; ++p) {
        if (column_[p] != 0.0) x_[head_[p]] -= delta * column_[p];
      }
      x_[leavingVar] = target;

      // Basis change.
      status_[leavingVar] = toLower ? Status::AtLower : Status::AtUpper;
      pos_[leavingVar] = kNotBasic;
      head_[r] = q;
      status_[q] = Status::Basic;
      pos_[q] = r;
      update_inverse(r);
      ++res.iterations;
      ++totalIterations_;
      if (++updates_ >= opt_.refactorEvery) rebuild();
    }
    res.value = min_objective();
    return res;
  }

 private:
  enum class Status : std::uint8_t { Basic, AtLower, AtUpper };
  static constexpr std::size_t kNotBasic = static_cast<std::size_t>(-1);

  double min_objective() const {
    double z = 0.0;
    for (std::size_t j = 0; j < n_; ++j) z += cost_[j] * x_[j];
    return z;
  }

  // Column j of [A, -I] as (row, value) pairs through a callback.
  template <class F>
  void for_column(std::size_t j, F&& f) const {
    if (j < n_) {
      for (std::size_t k = lp_.matrix.start[j]; k < lp_.matrix.start[j + 1]; ++k) {
        f(lp_.matrix.index[k], lp_.matrix.value[k]);
      }
    } else {
      f(j - n_, -1.0);
    }
  }

  void rebuild() {
    refactor();
    recompute_duals();
    flip_to_dual_feasible_bounds();
    recompute_primal();
    factored_ = true;
  }

  void flip_to_dual_feasible_bounds() {
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::Basic) continue;
      if (d_[j] > opt_.dualTol) status_[j] = Status::AtLower;
      else if (d_[j] < -opt_.dualTol) status_[j] = Status::AtUpper;
      x_[j] = status_[j] == Status::AtLower ? lo_[j] : up_[j];
    }
  }

  // Moves nonbasics onto their dual-feasible bounds after bound changes and
  // corrects x_B by -B^{-1} a_j delta_j for the columns that moved.
  void shift_nonbasics() {
    shift_.assign(m_, 0.0);
    mark_.assign(m_, 0);
    touched_.clear();
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::Basic) continue;
      if (d_[j] > opt_.dualTol) status_[j] = Status::AtLower;
      else if (d_[j] < -opt_.dualTol) status_[j] = Status::AtUpper;
      const double target = status_[j] == Status::AtLower ? lo_[j] : up_[j];
      const double delta = target - x_[j];
      if (delta == 0.0) continue;
      x_[j] = target;
      for_column(j, [&](std::size_t i, double v) {
        if (!mark_[i]) {
          mark_[i] = 1;
          touched_.push_back(i);
        }
        shift_[i] += v * delta;
      });
    }
    for (std::size_t i : touched_) {
      const double v = shift_[i];
      if (v == 0.0) continue;
      for (std::size_t p = 0; p < m_; ++p) x_[head_[p]] -= binv_[p * m_ + i] * v;
    }
  }

  // x_B = B^{-1} (-N x_N)
  void recompute_primal() {
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::Basic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](std::size_t i, double v) { rhs[i] -= v * xj; });
    }
    for (std::size_t p = 0; p < m_; ++p) {
      const double* row = &binv_[p * m_];
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i) s += row[i] * rhs[i];
      x_[head_[p]] = s;
    }
  }

  // y' = c_B' B^{-1};  d_j = c_j - y' a_j
  void recompute_duals() {
    std::vector<double> y(m_, 0.0);
    for (std::size_t p = 0; p < m_; ++p) {
      const double cb = cost_[head_[p]];
      if (cb == 0.0) continue;
      const double* row = &binv_[p * m_];
      for (std::size_t i = 0; i < m_; ++i) y[i] += cb * row[i];
    }
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::Basic) {
        d_[j] = 0.0;
        continue;
      }
      double s = cost_[j];
      for_column(j, [&](std::size_t i, double v) { s -= y[i] * v; });
      d_[j] = s;
    }
  }

  std::optional<std::size_t> choose_leaving(bool bland) const {
    std::optional<std::size_t> best;
    double bestInf = 0.0;
    std::size_t bestVar = kNotBasic;
    for (std::size_t p = 0; p < m_; ++p) {
      const std::size_t j = head_[p];
      const double tol = opt_.primalTol * (1.0 + std::max(std::abs(lo_[j]), std::abs(up_[j])));
      double inf = 0.0;
      if (x_[j] < lo_[j] - tol) inf = lo_[j] - x_[j];
      else if (x_[j] > up_[j] + tol) inf = x_[j] - up_[j];
      if (inf <= 0.0) continue;
      if (bland) {
        if (j < bestVar) {
          bestVar = j;
          best = p;
        }
      } else if (inf > bestInf) {
        bestInf = inf;
        best = p;
      }
    }
    return best;
  }

  // alpha_j = (row r of B^{-1}) . a_j for nonbasic j.
  void compute_pivot_row(std::size_t r) {
    alpha_.assign(n_ + m_, 0.0);
    nonbasicNz_.clear();
    const double* rho = &binv_[r * m_];
    for (std::size_t j = 0; j < n_; ++j) {
      if (status_[j] == Status::Basic) continue;
      double s = 0.0;
      for (std::size_t k = lp_.matrix.start[j]; k < lp_.matrix.start[j + 1]; ++k) {
        s += rho[lp_.matrix.index[k]] * lp_.matrix.value[k];
      }
      if (s != 0.0) {
        alpha_[j] = s;
        nonbasicNz_.push_back(j);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = n_ + i;
      if (status_[j] == Status::Basic || rho[i] == 0.0) continue;
      alpha_[j] = -rho[i];
      nonbasicNz_.push_back(j);
    }
  }

  // Two-pass Harris ratio test over eligible nonbasic columns.
  std::optional<std::size_t> choose_entering(bool toLower, bool bland) {
    ratio_.clear();
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t j : nonbasicNz_) {
      if (lo_[j] == up_[j]) continue;
      const double a = alpha_[j];
      if (std::abs(a) < opt_.pivotTol) continue;
      // Raising x_r needs a nonbasic move with -a * delta > 0.
      const bool atLower = status_[j] == Status::AtLower;
      const bool eligible = toLower ? (atLower ? a < 0 : a > 0) : (atLower ? a > 0 : a < 0);
      if (!eligible) continue;
      ratio_.push_back(j);
      const double dj = atLower ? std::max(d_[j], 0.0) : std::max(-d_[j], 0.0);
      bound = std::min(bound, (dj + opt_.dualTol) / std::abs(a));
    }
    if (ratio_.empty()) return std::nullopt;
    std::optional<std::size_t> best;
    double bestAbs = 0.0;
    double bestRatio = std::numeric_limits<double>::infinity();
    for (std::size_t j : ratio_) {
      const bool atLower = status_[j] == Status::AtLower;
      const double dj = atLower ? std::max(d_[j], 0.0) : std::max(-d_[j], 0.0);
      const double ratio = dj / std::abs(alpha_[j]);
      if (bland) {
        if (ratio < bestRatio - 1e-12 || (ratio <= bestRatio + 1e-12 && j < *best)) {
          bestRatio = std::min(bestRatio, ratio);
          best = j;
        }
        continue;
      }
      if (ratio <= bound && std::abs(alpha_[j]) > bestAbs) {
        bestAbs = std::abs(alpha_[j]);
        best = j;
      }
    }
    return best;
  }

  // column_ = B^{-1} a_q
  void compute_column(std::size_t q) {
    column_.assign(m_, 0.0);
    for_column(q, [&](std::size_t i, double v) {
      for (std::size_t p = 0; p < m_; ++p) column_[p] += binv_[p * m_ + i] * v;
    });
  }

  void update_inverse(std::size_t r) {
    const double piv = column_[r];
    double* rowR = &binv_[r * m_];
    rowNz_.clear();
    for (std::size_t i = 0; i < m_; ++i) {
      if (rowR[i] != 0.0) {
        rowR[i] /= piv;
        rowNz_.push_back(i);
      }
    }
    for (std::size_t p = 0; p < m_; ++p) {
      if (p == r) continue;
      const double f = column_[p];
      if (f == 0.0) continue;
      double* row = &binv_[p * m_];
      for (std::size_t i : rowNz_) row[i] -= f * rowR[i];
    }
  }

  // Rebuilds B^{-1} from the basis head. Basic slacks make B block
  // triangular, so only the structural part needs Gauss-Jordan elimination.
  // Dependent structural columns are swapped for slacks.
  void refactor() {
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (try_refactor()) {
        updates_ = 0;
        return;
      }
    }
    throw Error("basis repair failed");
  }

  bool try_refactor() {
    std::vector<std::size_t> structPos;
    std::vector<char> rowHasSlack(m_, 0);
    for (std::size_t p = 0; p < m_; ++p) {
      if (head_[p] < n_) structPos.push_back(p);
      else rowHasSlack[head_[p] - n_] = 1;
    }
    std::vector<std::size_t> freeRows;
    std::vector<std::size_t> localOfRow(m_, kNotBasic);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!rowHasSlack[i]) {
        localOfRow[i] = freeRows.size();
        freeRows.push_back(i);
      }
    }
    const std::size_t k = structPos.size();
    if (freeRows.size() != k) throw Error("basis bookkeeping inconsistent");

    // aug = [S_R | I], k x 2k
    std::vector<double> aug(k * 2 * k, 0.0);
    const std::size_t w = 2 * k;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t j = head_[structPos[c]];
      for (std::size_t e = lp_.matrix.start[j]; e < lp_.matrix.start[j + 1]; ++e) {
        const std::size_t i = lp_.matrix.index[e];
        if (localOfRow[i] != kNotBasic) aug[localOfRow[i] * w + c] = lp_.matrix.value[e];
      }
    }
    for (std::size_t i = 0; i < k; ++i) aug[i * w + k + i] = 1.0;

    std::vector<std::size_t> pivotRow(k, kNotBasic);
    std::vector<char> used(k, 0);
    std::vector<std::size_t> dependent;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t best = kNotBasic;
      double bestAbs = 1e-11;
      for (std::size_t i = 0; i < k; ++i) {
        if (used[i]) continue;
        const double a = std::abs(aug[i * w + c]);
        if (a > bestAbs) {
          bestAbs = a;
          best = i;
        }
      }
      if (best == kNotBasic) {
        dependent.push_back(c);
        continue;
      }
      used[best] = 1;
      pivotRow[c] = best;
      double* prow = &aug[best * w];
      const double inv = 1.0 / prow[c];
      std::vector<std::size_t> nz;
      for (std::size_t t = 0; t < w; ++t) {
        if (prow[t] != 0.0) {
          prow[t] *= inv;
          nz.push_back(t);
        }
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (i == best) continue;
        const double f = aug[i * w + c];
        if (f == 0.0) continue;
        double* row = &aug[i * w];
        for (std::size_t t : nz) row[t] -= f * prow[t];
      }
    }
    if (!dependent.empty()) {
      std::vector<std::size_t> spare;
      for (std::size_t i = 0; i < k; ++i) {
        if (!used[i]) spare.push_back(freeRows[i]);
      }
      for (std::size_t idx = 0; idx < dependent.size(); ++idx) {
        const std::size_t p = structPos[dependent[idx]];
        const std::size_t out = head_[p];
        const std::size_t slack = n_ + spare[idx];
        status_[out] = d_[out] < 0.0 ? Status::AtUpper : Status::AtLower;
        x_[out] = status_[out] == Status::AtLower ? lo_[out] : up_[out];
        pos_[out] = kNotBasic;
        head_[p] = slack;
        status_[slack] = Status::Basic;
        pos_[slack] = p;
      }
      return false;
    }

    // W = S_R^{-1}: row c of W is the right half of aug row pivotRow[c].
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      const double* src = &aug[pivotRow[c] * w + k];
      double* dst = &binv_[structPos[c] * m_];
      for (std::size_t t = 0; t < k; ++t) dst[freeRows[t]] = src[t];
    }
    // Slack rows: B^{-1}[p][R] = (S_I W)[i][R],  B^{-1}[p][i] = -1.
    for (std::size_t p = 0; p < m_; ++p) {
      if (head_[p] >= n_) binv_[p * m_ + (head_[p] - n_)] = -1.0;
    }
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t j = head_[structPos[c]];
      const double* wrow = &aug[pivotRow[c] * w + k];
      for (std::size_t e = lp_.matrix.start[j]; e < lp_.matrix.start[j + 1]; ++e) {
        const std::size_t i = lp_.matrix.index[e];
        if (localOfRow[i] != kNotBasic) continue;
        const double v = lp_.matrix.value[e];
        double* dst = &binv_[pos_[n_ + i] * m_];
        for (std::size_t t = 0; t < k; ++t) dst[freeRows[t]] += v * wrow[t];
      }
    }
    return true;
  }

  LpData lp_;
  Options opt_;
  std::size_t m_, n_;
  std::vector<double> lo_, up_, cost_, x_, d_;
  std::vector<Status> status_;
  std::vector<std::size_t> pos_, head_;
  std::vector<double> binv_;
  std::vector<double> alpha_, column_;
  std::vector<std::size_t> nonbasicNz_, ratio_, rowNz_, touched_;
  std::vector<double> shift_;
  std::vector<char> mark_;
  std::size_t updates_ = 0;
  bool factored_ = false;
  std::size_t totalIterations_ = 0;
};

}  // namespace blockbid::solver
