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

// Order combinations (single hours and contiguous block runs), the decoded
// order book, and the market legality rules that every placed book obeys.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockbid/errors.hpp"
#include "blockbid/log.hpp"
#include "blockbid/mip/format.hpp"

namespace blockbid {

inline constexpr std::size_t kMinBlockHours = 3;

// A contiguous set of hours [start, start + length), 0-based.
struct Run {
  std::size_t start = 0;
  std::size_t length = 0;

  bool covers(std::size_t t) const { return t >= start && t < start + length; }
  bool operator==(const Run&) const = default;
};

struct ComboSets {
  std::size_t hours = 0;
  std::vector<Run> hourly;
  std::vector<Run> blocks;

  std::size_t H() const { return hourly.size(); }
  std::size_t B() const { return blocks.size(); }

  // 0/1 indicator vector of a combination column.
  static std::vector<int> indicator(const Run& run, std::size_t hours) {
    std::vector<int> v(hours, 0);
    for (std::size_t t = run.start; t < run.start + run.length && t < hours; ++t) v[t] = 1;
    return v;
  }
};

inline std::vector<Run> enumerate_hourly(std::size_t hours) {
  std::vector<Run> cols;
  cols.reserve(hours);
  for (std::size_t t = 0; t < hours; ++t) cols.push_back({t, 1});
  return cols;
}

// Every contiguous run of length minLen..hours, ordered by (length, start).
inline std::vector<Run> enumerate_blocks(std::size_t hours, std::size_t minLen = kMinBlockHours) {
  std::vector<Run> cols;
  if (hours < minLen) {
    warn("horizon of " + std::to_string(hours) + " hours admits no block of " +
         std::to_string(minLen) + " hours");
    return cols;
  }
  for (std::size_t len = minLen; len <= hours; ++len) {
    for (std::size_t start = 0; start + len <= hours; ++start) cols.push_back({start, len});
  }
  return cols;
}

inline ComboSets enumerate_combinations(std::size_t hours, std::size_t minLen = kMinBlockHours) {
  return {hours, enumerate_hourly(hours), enumerate_blocks(hours, minLen)};
}

enum class OrderKind { Hourly, Block, ProfileBlock };

inline std::string to_string(OrderKind k) {
  switch (k) {
    case OrderKind::Hourly: return "hourly";
    case OrderKind::Block: return "block";
    case OrderKind::ProfileBlock: return "profile_block";
  }
  return "?";
}

inline OrderKind order_kind_from_string(const std::string& s) {
  if (s == "hourly") return OrderKind::Hourly;
  if (s == "block") return OrderKind::Block;
  if (s == "profile_block") return OrderKind::ProfileBlock;
  throw ParseError("unknown order kind '" + s + "'");
}

// A placed order. Regular blocks carry one volume for every hour; profile
// blocks carry `profile` (one volume per covered hour) and `volume` is the
// first entry.
struct Order {
  OrderKind kind = OrderKind::Hourly;
  std::size_t start = 0;
  std::size_t duration = 1;
  double volume = 0.0;
  std::vector<double> profile;

  double volume_at(std::size_t t) const {
    return profile.empty() ? volume : profile.at(t - start);
  }
  Run run() const { return {start, duration}; }
};

struct OrderBook {
  std::vector<Order> orders;

  std::size_t size() const { return orders.size(); }
  bool empty() const { return orders.empty(); }
  std::size_t count(OrderKind k) const {
    return static_cast<std::size_t>(
        std::count_if(orders.begin(), orders.end(), [k](const Order& o) { return o.kind == k; }));
  }
};

struct DecodeOptions {
  double tol = 1e-6;
  // Profile variant: a block may vary its volume hour to hour.
  bool requireEqualVolume = true;
  // Optional per-hour start flags. A set flag inside a block run starts a new
  // block, so two adjacent blocks with different volumes stay separate.
  std::vector<double> blockStarts;
};

// Turns per-hour flexibility and order-status flags into an order book.
// Throws DomainError on a sub-minimum block, unequal volumes inside a regular
// block, overlapping flags, or flexibility on an hour without an order.
inline OrderBook decode_orders(std::span<const double> flex, std::span<const double> uHour,
                               std::span<const double> uBlock, const DecodeOptions& opt = {}) {
  const std::size_t T = flex.size();
  if (uHour.size() != T || uBlock.size() != T ||
      (!opt.blockStarts.empty() && opt.blockStarts.size() != T)) {
    throw DimensionError("decode_orders: flag vectors differ in length from flexibility");
  }
  auto on = [](double v) { return v > 0.5; };
  OrderBook book;
  std::size_t t = 0;
  while (t < T) {
    if (on(uHour[t]) && on(uBlock[t])) {
      throw DomainError("hour " + std::to_string(t + 1) + " flagged both hourly and block");
    }
    if (on(uHour[t])) {
      book.orders.push_back({OrderKind::Hourly, t, 1, flex[t], {}});
      ++t;
      continue;
    }
    if (!on(uBlock[t])) {
      if (std::abs(flex[t]) > opt.tol) {
        throw DomainError("nonzero flexibility " + std::to_string(flex[t]) + " at unflagged hour " +
                          std::to_string(t + 1));
      }
      ++t;
      continue;
    }
    std::size_t end = t + 1;
    while (end < T && on(uBlock[end]) && !on(uHour[end]) &&
           !(!opt.blockStarts.empty() && on(opt.blockStarts[end]))) {
      ++end;
    }
    const std::size_t len = end - t;
    if (len < kMinBlockHours) {
      throw DomainError("block shorter than minimum duration at hour " + std::to_string(t + 1));
    }
    Order o{opt.requireEqualVolume ? OrderKind::Block : OrderKind::ProfileBlock, t, len, flex[t],
            {}};
    if (opt.requireEqualVolume) {
      for (std::size_t k = t + 1; k < end; ++k) {
        if (std::abs(flex[k] - flex[t]) > opt.tol) {
          throw DomainError("unequal volumes inside block starting at hour " +
                            std::to_string(t + 1));
        }
      }
    } else {
      o.profile.assign(flex.begin() + static_cast<std::ptrdiff_t>(t),
                       flex.begin() + static_cast<std::ptrdiff_t>(end));
    }
    book.orders.push_back(std::move(o));
    t = end;
  }
  return book;
}

// Inverse of decode_orders for a legal book: per-hour flexibility, hourly and
// block flags, and block start flags.
struct EncodedBook {
  std::vector<double> flex, uHour, uBlock, starts;
};

inline EncodedBook encode_orders(const OrderBook& book, std::size_t hours) {
  EncodedBook e{std::vector<double>(hours, 0.0), std::vector<double>(hours, 0.0),
                std::vector<double>(hours, 0.0), std::vector<double>(hours, 0.0)};
  for (const auto& o : book.orders) {
    for (std::size_t t = o.start; t < o.start + o.duration && t < hours; ++t) {
      e.flex[t] = o.volume_at(t);
      (o.kind == OrderKind::Hourly ? e.uHour : e.uBlock)[t] = 1.0;
    }
    if (o.kind != OrderKind::Hourly && o.start < hours) e.starts[o.start] = 1.0;
  }
  return e;
}

inline ValidationReport check_legality(const OrderBook& book, std::size_t hours,
                                       double tol = 1e-6) {
  ValidationReport rep;
  std::vector<int> cover(hours, -1);
  for (std::size_t i = 0; i < book.orders.size(); ++i) {
    const Order& o = book.orders[i];
    const std::string loc = "order " + std::to_string(i + 1);
    if (o.duration == 0) rep.add("empty order", loc);
    if (o.kind == OrderKind::Hourly && o.duration != 1) {
      rep.add("hourly order longer than one hour", loc);
    }
    if (o.kind != OrderKind::Hourly && o.duration < kMinBlockHours) {
      rep.add("block shorter than minimum duration", loc, std::to_string(o.duration) + " hours");
    }
    if (o.start + o.duration > hours) {
      rep.add("exceeds horizon", loc,
              "ends at hour " + std::to_string(o.start + o.duration) + " of " +
                  std::to_string(hours));
    }
    if (!o.profile.empty() && o.profile.size() != o.duration) {
      rep.add("profile length mismatch", loc);
    }
    if (o.kind == OrderKind::Block && !o.profile.empty()) {
      for (double v : o.profile) {
        if (std::abs(v - o.profile.front()) > tol) {
          rep.add("unequal block volumes", loc);
          break;
        }
      }
    }
    bool positive = o.volume > tol;
    for (double v : o.profile) positive = positive || v > tol;
    if (positive) rep.add("positive volume", loc);
    for (std::size_t t = o.start; t < o.start + o.duration && t < hours; ++t) {
      if (cover[t] >= 0) {
        rep.add("overlap", "hour " + std::to_string(t + 1),
                "orders " + std::to_string(cover[t] + 1) + " and " + std::to_string(i + 1));
      } else {
        cover[t] = static_cast<int>(i);
      }
    }
  }
  return rep;
}

// Drops zero-volume orders and sorts by start hour; two books describing the
// same market position compare equal after this.
inline OrderBook canonicalize(const OrderBook& book, double tol = 1e-6) {
  OrderBook out;
  for (const auto& o : book.orders) {
    bool nonzero = std::abs(o.volume) > tol;
    for (double v : o.profile) nonzero = nonzero || std::abs(v) > tol;
    if (nonzero) out.orders.push_back(o);
  }
  std::sort(out.orders.begin(), out.orders.end(),
            [](const Order& a, const Order& b) { return a.start < b.start; });
  return out;
}

// Replaces every maximal run of >= 3 consecutive equal-volume hourly orders
// with one regular block.
inline OrderBook merge_hourly_runs(const OrderBook& book, double tol = 1e-6) {
  OrderBook sorted = book;
  std::sort(sorted.orders.begin(), sorted.orders.end(),
            [](const Order& a, const Order& b) { return a.start < b.start; });
  OrderBook out;
  std::size_t i = 0;
  while (i < sorted.orders.size()) {
    const Order& o = sorted.orders[i];
    std::size_t j = i + 1;
    if (o.kind == OrderKind::Hourly) {
      while (j < sorted.orders.size() && sorted.orders[j].kind == OrderKind::Hourly &&
             sorted.orders[j].start == sorted.orders[j - 1].start + 1 &&
             std::abs(sorted.orders[j].volume - o.volume) <= tol) {
        ++j;
      }
    }
    if (o.kind == OrderKind::Hourly && j - i >= kMinBlockHours) {
      out.orders.push_back({OrderKind::Block, o.start, j - i, o.volume, {}});
      i = j;
    } else {
      out.orders.push_back(o);
      ++i;
    }
  }
  return out;
}

inline bool same_orders(const OrderBook& a, const OrderBook& b, double tol = 1e-6) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Order& x = a.orders[i];
    const Order& y = b.orders[i];
    if (x.kind != y.kind || x.start != y.start || x.duration != y.duration) return false;
    for (std::size_t t = x.start; t < x.start + x.duration; ++t) {
      if (std::abs(x.volume_at(t) - y.volume_at(t)) > tol) return false;
    }
  }
  return true;
}

// JSON: array of {kind, start, duration, volume[, volumes]}; start is 1-based.
inline nlohmann::json to_json(const OrderBook& book) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& o : book.orders) {
    nlohmann::json j = {{"kind", to_string(o.kind)},
                        {"start", o.start + 1},
                        {"duration", o.duration},
                        {"volume", o.volume}};
    if (!o.profile.empty()) j["volumes"] = o.profile;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline OrderBook order_book_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw ParseError("order book JSON must be an array");
  OrderBook book;
  for (const auto& j : arr) {
    Order o;
    o.kind = order_kind_from_string(j.at("kind").get<std::string>());
    const auto start = j.at("start").get<long long>();
    if (start < 1) throw ParseError("order start must be >= 1");
    o.start = static_cast<std::size_t>(start - 1);
    o.duration = j.at("duration").get<std::size_t>();
    o.volume = j.at("volume").get<double>();
    if (j.contains("volumes")) o.profile = j.at("volumes").get<std::vector<double>>();
    book.orders.push_back(std::move(o));
  }
  return book;
}

// Market-style report: one line per covered hour.
inline void write_orders_csv(std::ostream& os, const OrderBook& book) {
  os << "hour,kind,volume\n";
  OrderBook sorted = book;
  std::sort(sorted.orders.begin(), sorted.orders.end(),
            [](const Order& a, const Order& b) { return a.start < b.start; });
  for (const auto& o : sorted.orders) {
    for (std::size_t t = o.start; t < o.start + o.duration; ++t) {
      os << t + 1 << ',' << to_string(o.kind) << ',' << mip::format_number(o.volume_at(t)) << '\n';
    }
  }
}

}  // namespace blockbid
