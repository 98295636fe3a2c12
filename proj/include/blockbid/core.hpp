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

// Domain types of the flexibility model and the scalar operations on them.
// Volumes are MWh (sell-only, so <= 0), prices EUR/MWh, profit EUR. Hours are
// stored 0-based; messages print them 1-based.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blockbid/errors.hpp"
#include "blockbid/responsiveness.hpp"

namespace blockbid {

inline constexpr double kDefaultFeasTol = 1e-6;

struct TimeGrid {
  std::size_t hours = 24;
};

struct FlexibilityProfile {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t t) const { return values[t]; }
};

// Strictly lower triangular, nonpositive. entry(i, j) is the availability lost
// at hour i per MWh activated at an earlier hour j.
class CrossElasticityMatrix {
 public:
  CrossElasticityMatrix() = default;
  explicit CrossElasticityMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

struct FlexibilityModel {
  FlexibilityProfile profile;
  CrossElasticityMatrix cem;
};

struct FlexibilitySplit {
  std::vector<double> hourly;
  std::vector<double> block;
};

struct PriceSeries {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t t) const { return values[t]; }
};

struct Scenario {
  TimeGrid grid;
  FlexibilityModel hourModel;
  FlexibilityModel blockModel;
  PriceSeries prices;
  ResponsivenessCurve responsiveness;
  std::string label;

  std::size_t hours() const { return grid.hours; }
};

namespace detail {

inline std::string hour_loc(const std::string& what, std::size_t t) {
  return what + "[" + std::to_string(t + 1) + "]";
}

inline void validate_model(const FlexibilityModel& m, std::size_t hours, const std::string& name,
                           ValidationReport& rep) {
  if (m.profile.size() != hours) {
    rep.add("dimension mismatch", name + ".profile",
            std::to_string(m.profile.size()) + " != " + std::to_string(hours));
  }
  for (std::size_t t = 0; t < m.profile.size(); ++t) {
    const double v = m.profile[t];
    if (!std::isfinite(v)) {
      rep.add("non-finite flexibility", hour_loc(name + ".profile", t));
    } else if (v > 0.0) {
      rep.add("positive flexibility", hour_loc(name + ".profile", t), std::to_string(v));
    }
  }
  if (m.cem.size() != hours) {
    rep.add("dimension mismatch", name + ".cem",
            std::to_string(m.cem.size()) + " != " + std::to_string(hours));
  }
  for (std::size_t i = 0; i < m.cem.size(); ++i) {
    for (std::size_t j = 0; j < m.cem.size(); ++j) {
      const double v = m.cem(i, j);
      const std::string loc =
          name + ".cem[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
      if (!std::isfinite(v)) {
        rep.add("non-finite cross elasticity", loc);
      } else if (i == j && v != 0.0) {
        rep.add("nonzero diagonal", loc, std::to_string(v));
      } else if (j > i && v != 0.0) {
        rep.add("upper triangular entry", loc, std::to_string(v));
      } else if (v > 0.0) {
        rep.add("positive cross elasticity", loc, std::to_string(v));
      }
    }
  }
}

}  // namespace detail

// Lists every violated type invariant; an empty report means well-formed.
inline ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport rep;
  const std::size_t T = s.grid.hours;
  if (T < 3) rep.add("horizon too short", "grid.hours", "need at least 3 hours for a block order");
  detail::validate_model(s.hourModel, T, "hourModel", rep);
  detail::validate_model(s.blockModel, T, "blockModel", rep);
  if (s.prices.size() != T) {
    rep.add("dimension mismatch", "prices",
            std::to_string(s.prices.size()) + " != " + std::to_string(T));
  }
  for (std::size_t t = 0; t < s.prices.size(); ++t) {
    if (!std::isfinite(s.prices[t])) rep.add("non-finite price", detail::hour_loc("prices", t));
  }
  rep.append(s.responsiveness.validate());
  return rep;
}

inline std::vector<double> total_flexibility(const FlexibilitySplit& split) {
  if (split.hourly.size() != split.block.size()) {
    throw DimensionError("hourly and block flexibility differ in length");
  }
  std::vector<double> total(split.hourly.size());
  for (std::size_t t = 0; t < total.size(); ++t) total[t] = split.hourly[t] + split.block[t];
  return total;
}

// Lower bound on activated flexibility at hour t given earlier activations:
// F^max_t + sum_{j<t} A_tj F_j.
inline double flexibility_lower_bound(const FlexibilityModel& model, std::span<const double> flex,
                                      std::size_t t) {
  double lb = model.profile[t];
  for (std::size_t j = 0; j < t; ++j) lb += model.cem(t, j) * flex[j];
  return lb;
}

inline bool flexibility_feasible(const FlexibilityModel& model, std::span<const double> flex,
                                 double tol = kDefaultFeasTol) {
  if (flex.size() != model.profile.size() || model.cem.size() != model.profile.size()) {
    return false;
  }
  for (std::size_t t = 0; t < flex.size(); ++t) {
    if (flex[t] > tol) return false;
    if (flex[t] < flexibility_lower_bound(model, flex, t) - tol) return false;
  }
  return true;
}

// Aggregator profit sum_t -F_t (spot_t - paid_t).
inline double profit(std::span<const double> flex, const PriceSeries& spot,
                     std::span<const double> paid) {
  if (flex.size() != spot.size() || flex.size() != paid.size()) {
    throw DimensionError("profit: flexibility, spot and paid prices differ in length");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < flex.size(); ++t) total += -flex[t] * (spot[t] - paid[t]);
  return total;
}

}  // namespace blockbid
