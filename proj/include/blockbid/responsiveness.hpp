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

// Prosumer price responsiveness: the sigmoid supply curve, its piecewise
// linearization over price breakpoints, and the chord linearization of the
// procurement cost F * price that keeps the bidding model linear.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "blockbid/errors.hpp"

namespace blockbid {

// Sigmoid parameters of a prosumer cluster. `fMax` is the knee flexibility
// (MWh) reached around `lambdaMax` (EUR/MWh).
struct ResponsivenessCurve {
  double a = 6.0;
  double b = -0.4;
  double fMax = 10.0;
  double lambdaMax = 25.0;

  ValidationReport validate() const {
    ValidationReport r;
    if (!(fMax > 0.0)) r.add("nonpositive knee flexibility", "responsiveness.fMax");
    if (!(lambdaMax > 0.0)) r.add("nonpositive knee price", "responsiveness.lambdaMax");
    if (!(b < 0.0)) r.add("nonnegative price sensitivity", "responsiveness.b");
    if (!std::isfinite(a)) r.add("non-finite shape constant", "responsiveness.a");
    return r;
  }
};

// Flexibility (MWh, <= 0) delivered by the cluster when paid `price`.
inline double sigmoid_flexibility(const ResponsivenessCurve& curve, double price) {
  if (!(price >= 0.0 && price <= curve.lambdaMax)) {
    throw DomainError("price " + std::to_string(price) + " outside [0, " +
                      std::to_string(curve.lambdaMax) + "]");
  }
  return -curve.fMax / (1.0 + std::exp(curve.a + curve.b * price));
}

// Piecewise-linear responsiveness over P pieces. `values[k]` is the raw
// sigmoid value at `breakpoints[k]`; the model uses values shifted by
// values[0] so that a zero price buys exactly zero flexibility.
struct PWLResponsiveness {
  std::vector<double> breakpoints;
  std::vector<double> values;
  std::vector<double> slopes;

  std::size_t pieces() const { return slopes.size(); }
  double lambdaMax() const { return breakpoints.back(); }
  double shifted(std::size_t k) const { return values[k] - values.front(); }
};

inline PWLResponsiveness build_pwl(const ResponsivenessCurve& curve,
                                   const std::vector<double>& breakpoints) {
  if (breakpoints.size() < 2) {
    throw DomainError("piecewise linearization needs at least 2 breakpoints");
  }
  if (auto rep = curve.validate(); !rep.ok()) throw DomainError(rep.str());
  if (breakpoints.front() != 0.0) throw DomainError("first breakpoint must be 0");
  if (breakpoints.back() != curve.lambdaMax) {
    throw DomainError("last breakpoint must equal the knee price");
  }
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1])) {
      throw DomainError("breakpoints must be strictly increasing");
    }
  }
  PWLResponsiveness pwl;
  pwl.breakpoints = breakpoints;
  pwl.values.reserve(breakpoints.size());
  for (double lambda : breakpoints) pwl.values.push_back(sigmoid_flexibility(curve, lambda));
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    pwl.slopes.push_back((pwl.values[p + 1] - pwl.values[p]) /
                         (breakpoints[p + 1] - breakpoints[p]));
  }
  return pwl;
}

// Index of the piece containing `price`; a price sitting on an interior
// breakpoint belongs to the lower-indexed piece.
inline std::size_t pwl_piece(const PWLResponsiveness& pwl, double price) {
  if (!(price >= pwl.breakpoints.front() && price <= pwl.breakpoints.back())) {
    throw DomainError("price " + std::to_string(price) + " outside the linearized range");
  }
  auto it = std::lower_bound(pwl.breakpoints.begin() + 1, pwl.breakpoints.end(), price);
  return static_cast<std::size_t>(it - pwl.breakpoints.begin()) - 1;
}

// Shifted piecewise-linear flexibility at `price`; zero at price 0.
inline double pwl_flexibility(const PWLResponsiveness& pwl, double price) {
  const std::size_t p = pwl_piece(pwl, price);
  if (price == pwl.breakpoints[p + 1]) return pwl.shifted(p + 1);
  return pwl.shifted(p) + pwl.slopes[p] * (price - pwl.breakpoints[p]);
}

// One chord of the cost curve, parametrized by price over
// [lambdaStart, lambdaStart + width]. Flexibility and cost are affine in the
// offset u = price - lambdaStart along the chord.
struct CostSegment {
  std::size_t piece = 0;
  double lambdaStart = 0.0;
  double width = 0.0;
  double flexStart = 0.0;
  double flexSlope = 0.0;
  double costStart = 0.0;
  double costSlope = 0.0;
};

// Procurement cost c(F) = price(F) * F sampled at R+1 equally spaced points
// inside every responsiveness piece and joined by chords. Exact at every
// sample point, conservative (chord <= true cost) in between.
struct CostCurve {
  std::size_t refinement = 1;
  std::vector<CostSegment> segments;
  // Largest |true cost - chord| over any segment, EUR per hour.
  double maxChordError = 0.0;

  std::size_t size() const { return segments.size(); }

  // Breakpoint prices in increasing order, including both ends.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (const auto& s : segments) out.push_back(s.lambdaStart);
    if (!segments.empty()) out.push_back(segments.back().lambdaStart + segments.back().width);
    return out;
  }
};

// Cost of buying flexibility at `price` on the exact (bilinear) curve.
inline double exact_cost(const PWLResponsiveness& pwl, double price) {
  return price * pwl_flexibility(pwl, price);
}

// Chord cost at `price`; pieces are searched with the same tie rule as
// pwl_piece.
inline double chord_cost(const CostCurve& cost, double price) {
  for (const auto& s : cost.segments) {
    if (price <= s.lambdaStart + s.width) {
      return s.costStart + s.costSlope * (price - s.lambdaStart);
    }
  }
  throw DomainError("price outside the cost curve");
}

inline CostCurve build_cost_curve(const PWLResponsiveness& pwl, std::size_t refinement) {
  if (refinement < 1) throw DomainError("cost curve refinement must be >= 1");
  CostCurve curve;
  curve.refinement = refinement;
  for (std::size_t p = 0; p < pwl.pieces(); ++p) {
    const double lo = pwl.breakpoints[p];
    const double hi = pwl.breakpoints[p + 1];
    const double slope = pwl.slopes[p];
    // A flat piece buys the same volume at every price in it, so one chord
    // covers it exactly.
    const std::size_t r = slope == 0.0 ? 1 : refinement;
    for (std::size_t k = 0; k < r; ++k) {
      const double start = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(r);
      const double end =
          k + 1 == r ? hi : lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(r);
      const double flexStart = k == 0 ? pwl.shifted(p) : pwl.shifted(p) + slope * (start - lo);
      const double flexEnd = k + 1 == r ? pwl.shifted(p + 1) : pwl.shifted(p) + slope * (end - lo);
      CostSegment seg;
      seg.piece = p;
      seg.lambdaStart = start;
      seg.width = end - start;
      seg.flexStart = flexStart;
      seg.flexSlope = slope;
      seg.costStart = start * flexStart;
      seg.costSlope = (end * flexEnd - seg.costStart) / seg.width;
      curve.segments.push_back(seg);
    }
  }
  constexpr int kSamples = 64;
  for (const auto& s : curve.segments) {
    for (int i = 0; i <= kSamples; ++i) {
      const double u = s.width * i / kSamples;
      const double lambda = s.lambdaStart + u;
      const double exact = lambda * (s.flexStart + s.flexSlope * u);
      const double chord = s.costStart + s.costSlope * u;
      curve.maxChordError = std::max(curve.maxChordError, std::abs(exact - chord));
    }
  }
  return curve;
}

}  // namespace blockbid
