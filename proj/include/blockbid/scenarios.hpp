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

// Synthetic experiment grid: seasonal log-normal flexibility profiles,
// cross-elasticity matrices, price files, prosumer clusters, and the suite
// built from their cross product. Magnitudes are synthetic defaults.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockbid/core.hpp"
#include "blockbid/errors.hpp"
#include "blockbid/mip/format.hpp"
#include "blockbid/responsiveness.hpp"

namespace blockbid::scenarios {

enum class Season { Autumn, Winter, Spring, Summer };
enum class FlexClass { Hourly, Block };

inline const std::vector<Season>& all_seasons() {
  static const std::vector<Season> s{Season::Autumn, Season::Winter, Season::Spring,
                                     Season::Summer};
  return s;
}

inline std::string to_string(Season s) {
  switch (s) {
    case Season::Autumn: return "Autumn";
    case Season::Winter: return "Winter";
    case Season::Spring: return "Spring";
    case Season::Summer: return "Summer";
  }
  return "?";
}

inline Season season_from_string(const std::string& name) {
  for (Season s : all_seasons()) {
    if (to_string(s) == name) return s;
  }
  throw ParseError("unknown season '" + name + "'");
}

// Synthetic generator constants. Scales are exp(mu) of the log-normal
// samples in MWh; peaks land around 60-80% of a 10 MWh cluster.
struct SyntheticParams {
  double sigma = 0.2;
  double hourlyScale[4] = {6.5, 7.5, 6.0, 5.5};  // Autumn, Winter, Spring, Summer
  double blockScale[4] = {7.0, 7.0, 6.8, 6.5};
  double cemScale = 0.08;
  double cemSigma = 0.3;
  double cemDecay = 0.5;  // rebound halves per hour of lag
  double priceBase[4] = {45.0, 55.0, 35.0, 30.0};  // EUR/MWh
  double priceSigma = 0.12;
  double priceRho = 0.6;  // hour-to-hour persistence of the log noise
};

// Diurnal shape for a 1-based hour of day.
inline double diurnal_mask(Season season, FlexClass cls, std::size_t hourOfDay) {
  const std::size_t h = hourOfDay;
  if (cls == FlexClass::Block) {
    // Home hours: 19:00 to 04:00.
    if (h >= 19 || h <= 4) return 1.0;
    if (h == 18 || h == 5) return 0.6;
    return 0.3;
  }
  const bool morning = h >= 7 && h <= 9;
  const bool evening = h >= 17 && h <= 21;
  const bool midday = h >= 11 && h <= 16;
  switch (season) {
    case Season::Winter: return morning || evening ? 1.0 : (h <= 5 ? 0.45 : 0.55);
    case Season::Autumn: return evening ? 1.0 : morning ? 0.9 : (h <= 5 ? 0.4 : 0.5);
    case Season::Spring: return evening ? 0.9 : morning ? 0.8 : midday ? 0.6 : 0.4;
    case Season::Summer: return midday ? 1.0 : evening ? 0.7 : 0.35;
  }
  return 0.5;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (auto s : stream) words.push_back(static_cast<std::uint32_t>(s));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

inline FlexibilityProfile gen_profile(Season season, FlexClass cls, int variant, std::uint64_t seed,
                                      std::size_t hours = 24, const SyntheticParams& p = {}) {
  auto rng = make_rng(seed, {1, static_cast<std::uint64_t>(season), static_cast<std::uint64_t>(cls),
                             static_cast<std::uint64_t>(variant)});
  const auto si = static_cast<std::size_t>(season);
  const double scale = cls == FlexClass::Hourly ? p.hourlyScale[si] : p.blockScale[si];
  std::lognormal_distribution<double> dist(std::log(scale), p.sigma);
  FlexibilityProfile out;
  for (std::size_t t = 0; t < hours; ++t) {
    const double sample = p.sigma == 0.0 ? scale : dist(rng);
    out.values.push_back(-sample * diurnal_mask(season, cls, t % 24 + 1));
  }
  return out;
}

inline CrossElasticityMatrix gen_cem(std::size_t hours, std::uint64_t seed, std::uint64_t stream = 0,
                                     const SyntheticParams& p = {}) {
  if (hours < 1) throw DomainError("cross-elasticity matrix needs at least one hour");
  auto rng = make_rng(seed, {2, stream});
  std::lognormal_distribution<double> dist(std::log(p.cemScale), p.cemSigma);
  CrossElasticityMatrix A(hours);
  for (std::size_t i = 0; i < hours; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      A(i, j) = -dist(rng) * std::pow(p.cemDecay, static_cast<double>(i - j - 1));
      sum += -A(i, j);
    }
    if (sum > 1.0) {
      for (std::size_t j = 0; j < i; ++j) A(i, j) /= sum;
    }
  }
  return A;
}

// Relative day-ahead price level for a 1-based hour of day: night trough,
// morning and evening peaks.
inline double price_shape(Season season, std::size_t hourOfDay) {
  const std::size_t h = hourOfDay;
  if (h <= 5) return 0.75;
  if (h >= 7 && h <= 9) return season == Season::Summer ? 1.05 : 1.2;
  if (h >= 17 && h <= 20) return season == Season::Summer ? 1.1 : 1.3;
  if (h >= 22) return 0.85;
  return season == Season::Summer && h >= 11 && h <= 15 ? 0.9 : 1.0;
}

// Spot prices with AR(1) log-normal noise around the seasonal shape.
inline PriceSeries gen_prices(Season season, std::uint64_t seed, std::uint64_t stream = 0,
                              std::size_t hours = 24, const SyntheticParams& p = {}) {
  auto rng = make_rng(seed, {3, static_cast<std::uint64_t>(season), stream});
  std::normal_distribution<double> eps(0.0, 1.0);
  const double innov = p.priceSigma * std::sqrt(1.0 - p.priceRho * p.priceRho);
  double z = p.priceSigma * eps(rng);
  PriceSeries out;
  for (std::size_t t = 0; t < hours; ++t) {
    if (t > 0) z = p.priceRho * z + innov * eps(rng);
    const double v = p.priceBase[static_cast<std::size_t>(season)] *
                     price_shape(season, t % 24 + 1) * std::exp(z);
    out.values.push_back(std::round(v * 100.0) / 100.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prices

// "YYYY-MM-DDTHH:MM[:SS]" -> hours since the epoch.
inline long long parse_hour_stamp(std::string_view s, std::size_t line) {
  auto fail = [&]() -> long long {
    throw ParseError("line " + std::to_string(line) + ": bad timestamp '" + std::string(s) + "'");
  };
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    if (pos + len > s.size()) fail();
    auto r = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (r.ec != std::errc() || r.ptr != s.data() + pos + len) fail();
    return v;
  };
  if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') {
    fail();
  }
  const std::chrono::year_month_day ymd{std::chrono::year{num(0, 4)},
                                        std::chrono::month{static_cast<unsigned>(num(5, 2))},
                                        std::chrono::day{static_cast<unsigned>(num(8, 2))}};
  if (!ymd.ok()) fail();
  const int hh = num(11, 2);
  const int mm = num(14, 2);
  if (hh > 23 || mm != 0) fail();
  std::size_t rest = 16;
  if (rest < s.size() && s[rest] == ':') {
    if (num(17, 2) != 0) fail();
    rest = 19;
  }
  if (rest < s.size() && !(s.substr(rest) == "Z")) fail();
  const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
  return static_cast<long long>(days) * 24 + hh;
}

inline std::string format_hour_stamp(long long epochHour) {
  const auto days = std::chrono::sys_days(std::chrono::days(epochHour >= 0 ? epochHour / 24 : (epochHour - 23) / 24));
  const std::chrono::year_month_day ymd(days);
  const long long hh = epochHour - static_cast<long long>(days.time_since_epoch().count()) * 24;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hh);
  return buf;
}

struct PriceFile {
  PriceSeries prices;
  long long firstHour = 0;  // hours since the epoch
};

// CSV "hour_start_iso8601,price_eur_per_mwh"; an optional header line and
// '#' comments are skipped. Rows must be consecutive hours.
inline PriceFile parse_prices(const std::string& text, std::size_t expectedRows = 24) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  std::vector<std::pair<long long, double>> rows;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view v(line);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    if (v.empty() || v.front() == '#') continue;
    const auto comma = v.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineNo) + ": expected two comma-separated fields");
    }
    std::string_view stamp = v.substr(0, comma);
    std::string_view value = v.substr(comma + 1);
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.remove_suffix(1);
    if (rows.empty() && stamp == "hour_start_iso8601") continue;
    const long long hour = parse_hour_stamp(stamp, lineNo);
    const auto price = mip::parse_number(value);
    if (!price || !std::isfinite(*price)) {
      throw ParseError("line " + std::to_string(lineNo) + ": unparseable price '" +
                       std::string(value) + "'");
    }
    rows.emplace_back(hour, *price);
  }
  if (rows.size() != expectedRows) {
    throw ParseError("expected " + std::to_string(expectedRows) + " rows, found " +
                     std::to_string(rows.size()));
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const long long prev = rows[i - 1].first;
    const long long cur = rows[i].first;
    if (cur == prev || std::any_of(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(i),
                                   [&](const auto& r) { return r.first == cur; })) {
      throw ParseError("duplicate hour " + format_hour_stamp(cur));
    }
    if (cur != prev + 1) {
      throw ParseError("gap or disorder between " + format_hour_stamp(prev) + " and " +
                       format_hour_stamp(cur));
    }
  }
  PriceFile out;
  out.firstHour = rows.front().first;
  for (const auto& r : rows) out.prices.values.push_back(r.second);
  return out;
}

inline PriceSeries load_prices(const std::string& path, std::size_t expectedRows = 24) {
  if (!std::filesystem::exists(path)) throw Error("price file not found: " + path);
  return parse_prices(mip::read_text_file(path), expectedRows).prices;
}

inline std::string prices_to_csv(const PriceSeries& p, long long firstHour) {
  std::string out = "hour_start_iso8601,price_eur_per_mwh\n";
  for (std::size_t t = 0; t < p.size(); ++t) {
    out += format_hour_stamp(firstHour + static_cast<long long>(t)) + "," +
           mip::format_number(p[t]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suite

struct Cluster {
  std::string name;
  double fMax = 10.0;
};

struct SuiteConfig {
  std::vector<Season> seasons = all_seasons();
  std::vector<int> variants{1, 2};
  std::vector<Cluster> clusters{{"Optimistic", 20.0}, {"Realistic", 10.0}, {"Pessimistic", 5.0}};
  // Per season (same order as `seasons`), one path per energy-price scenario.
  std::vector<std::vector<std::string>> priceFiles;
  std::vector<double> breakpoints{0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  double a = 6.0;
  double b = -0.4;
  double lambdaMax = 25.0;
  std::uint64_t seed = 2021;
  // Optional horizon window [windowStart, windowStart + windowLength) of the day.
  std::size_t windowStart = 0;
  std::size_t windowLength = 24;
  SyntheticParams synthetic;
};

struct SuiteEntry {
  Scenario scenario;
  Season season = Season::Autumn;
  int variant = 1;
  std::string cluster;
  std::size_t priceIndex = 1;  // 1-based
};

// Cuts hours [start, start + length) out of a scenario; the CEM keeps only
// interactions inside the window.
inline Scenario window(const Scenario& s, std::size_t start, std::size_t length) {
  if (start + length > s.hours()) {
    throw DimensionError("window [" + std::to_string(start) + ", " + std::to_string(start + length) +
                         ") exceeds the " + std::to_string(s.hours()) + "-hour horizon");
  }
  Scenario w = s;
  w.grid.hours = length;
  auto cut = [&](const FlexibilityModel& m) {
    FlexibilityModel out;
    out.cem = CrossElasticityMatrix(length);
    for (std::size_t i = 0; i < length; ++i) {
      out.profile.values.push_back(m.profile[start + i]);
      for (std::size_t j = 0; j < length; ++j) out.cem(i, j) = m.cem(start + i, start + j);
    }
    return out;
  };
  w.hourModel = cut(s.hourModel);
  w.blockModel = cut(s.blockModel);
  w.prices.values.assign(s.prices.values.begin() + static_cast<std::ptrdiff_t>(start),
                         s.prices.values.begin() + static_cast<std::ptrdiff_t>(start + length));
  return w;
}

inline std::string suite_label(Season season, int variant, const std::string& cluster,
                               std::size_t priceIndex) {
  return to_string(season) + std::to_string(variant) + ", " + cluster + ", Energy price " +
         std::to_string(priceIndex);
}

inline std::vector<SuiteEntry> build_suite(const SuiteConfig& cfg) {
  if (cfg.priceFiles.size() != cfg.seasons.size()) {
    throw DomainError("suite needs one price-file list per season");
  }
  std::vector<SuiteEntry> out;
  for (std::size_t si = 0; si < cfg.seasons.size(); ++si) {
    const Season season = cfg.seasons[si];
    std::vector<PriceSeries> prices;
    for (const auto& path : cfg.priceFiles[si]) prices.push_back(load_prices(path));
    for (int variant : cfg.variants) {
      FlexibilityModel hourModel{gen_profile(season, FlexClass::Hourly, variant, cfg.seed, 24, cfg.synthetic),
                                 gen_cem(24, cfg.seed, 10 * static_cast<std::uint64_t>(season) + 2 * static_cast<std::uint64_t>(variant), cfg.synthetic)};
      FlexibilityModel blockModel{gen_profile(season, FlexClass::Block, variant, cfg.seed, 24, cfg.synthetic),
                                  gen_cem(24, cfg.seed, 10 * static_cast<std::uint64_t>(season) + 2 * static_cast<std::uint64_t>(variant) + 1, cfg.synthetic)};
      for (std::size_t pi = 0; pi < prices.size(); ++pi) {
        for (const auto& cluster : cfg.clusters) {
          Scenario s;
          s.grid.hours = 24;
          s.hourModel = hourModel;
          s.blockModel = blockModel;
          s.prices = prices[pi];
          s.responsiveness = {cfg.a, cfg.b, cluster.fMax, cfg.lambdaMax};
          s.label = suite_label(season, variant, cluster.name, pi + 1);
          if (cfg.windowStart != 0 || cfg.windowLength != 24) {
            s = window(s, cfg.windowStart, cfg.windowLength);
          }
          if (auto rep = validate_scenario(s); !rep.ok()) {
            throw DomainError("generated scenario '" + s.label + "' invalid: " + rep.str());
          }
          out.push_back({std::move(s), season, variant, cluster.name, pi + 1});
        }
      }
    }
  }
  return out;
}

// Suite config JSON. Relative price paths resolve against `baseDir`.
inline SuiteConfig suite_config_from_json(const nlohmann::json& j, const std::string& baseDir = ".") {
  SuiteConfig cfg;
  if (j.contains("seasons")) {
    cfg.seasons.clear();
    for (const auto& s : j.at("seasons")) cfg.seasons.push_back(season_from_string(s.get<std::string>()));
  }
  if (j.contains("variants")) cfg.variants = j.at("variants").get<std::vector<int>>();
  if (j.contains("clusters")) {
    cfg.clusters.clear();
    for (const auto& c : j.at("clusters")) {
      cfg.clusters.push_back({c.at("name").get<std::string>(), c.at("fMax").get<double>()});
    }
  }
  if (j.contains("breakpoints")) cfg.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  if (j.contains("a")) cfg.a = j.at("a").get<double>();
  if (j.contains("b")) cfg.b = j.at("b").get<double>();
  if (j.contains("lambdaMax")) cfg.lambdaMax = j.at("lambdaMax").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("window")) {
    cfg.windowStart = j.at("window").at("start").get<std::size_t>();
    cfg.windowLength = j.at("window").at("length").get<std::size_t>();
  }
  if (j.contains("sigma")) cfg.synthetic.sigma = j.at("sigma").get<double>();
  const auto& files = j.at("priceFiles");
  for (Season s : cfg.seasons) {
    std::vector<std::string> paths;
    for (const auto& p : files.at(to_string(s))) {
      std::filesystem::path path(p.get<std::string>());
      if (path.is_relative()) path = std::filesystem::path(baseDir) / path;
      paths.push_back(path.string());
    }
    cfg.priceFiles.push_back(std::move(paths));
  }
  return cfg;
}

inline SuiteConfig load_suite_config(const std::string& path) {
  const auto j = nlohmann::json::parse(mip::read_text_file(path));
  return suite_config_from_json(j, std::filesystem::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------
// Random instances for tests and benchmarks

struct RandomScenarioOptions {
  double priceLow = 5.0;
  double priceHigh = 60.0;
  double profileScale = 6.0;
  double cemScale = 0.05;
  std::vector<double> fMaxChoices{5.0, 10.0, 20.0};
};

inline Scenario random_scenario(std::size_t hours, std::uint64_t seed,
                                const RandomScenarioOptions& opt = {}) {
  auto rng = make_rng(seed, {7, hours});
  std::lognormal_distribution<double> mag(std::log(opt.profileScale), 0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> price(opt.priceLow, opt.priceHigh);
  Scenario s;
  s.grid.hours = hours;
  auto model = [&]() {
    FlexibilityModel m;
    m.cem = CrossElasticityMatrix(hours);
    for (std::size_t t = 0; t < hours; ++t) {
      // Some hours offer nothing from a class.
      m.profile.values.push_back(unit(rng) < 0.15 ? 0.0 : -mag(rng));
      for (std::size_t j = 0; j < t; ++j) {
        m.cem(t, j) = -opt.cemScale * unit(rng) * std::pow(0.5, static_cast<double>(t - j - 1));
      }
    }
    return m;
  };
  s.hourModel = model();
  s.blockModel = model();
  for (std::size_t t = 0; t < hours; ++t) s.prices.values.push_back(price(rng));
  const double f = opt.fMaxChoices[static_cast<std::size_t>(unit(rng) * opt.fMaxChoices.size()) %
                                   opt.fMaxChoices.size()];
  s.responsiveness = {6.0, -0.4, f, 25.0};
  s.label = "random T=" + std::to_string(hours) + " seed=" + std::to_string(seed);
  return s;
}

// Constant spot price and constant profiles, no cross elasticities.
inline Scenario flat_scenario(std::size_t hours, double spot, double hourlyFlex, double blockFlex,
                              double fMax = 10.0) {
  Scenario s;
  s.grid.hours = hours;
  s.hourModel.profile.values.assign(hours, hourlyFlex);
  s.hourModel.cem = CrossElasticityMatrix(hours);
  s.blockModel.profile.values.assign(hours, blockFlex);
  s.blockModel.cem = CrossElasticityMatrix(hours);
  s.prices.values.assign(hours, spot);
  s.responsiveness = {6.0, -0.4, fMax, 25.0};
  s.label = "flat T=" + std::to_string(hours) + " spot=" + mip::format_number(spot);
  return s;
}

// Realistic seeded instance: a random season, variant and cluster from the
// synthetic grid, a synthetic price day, and a random window of `hours`.
inline Scenario seeded_scenario(std::size_t hours, std::uint64_t seed,
                                const SyntheticParams& p = {}) {
  if (hours < 1 || hours > 24) throw DomainError("seeded scenarios span 1 to 24 hours");
  auto rng = make_rng(seed, {9, hours});
  const auto season = static_cast<Season>(rng() % 4);
  const int variant = 1 + static_cast<int>(rng() % 2);
  static constexpr double kClusters[3] = {20.0, 10.0, 5.0};
  const double fMax = kClusters[rng() % 3];
  const std::size_t start = static_cast<std::size_t>(rng() % (24 - hours + 1));
  Scenario day;
  day.grid.hours = 24;
  day.hourModel = {gen_profile(season, FlexClass::Hourly, variant, seed, 24, p),
                   gen_cem(24, seed, 2 * static_cast<std::uint64_t>(variant), p)};
  day.blockModel = {gen_profile(season, FlexClass::Block, variant, seed, 24, p),
                    gen_cem(24, seed, 2 * static_cast<std::uint64_t>(variant) + 1, p)};
  day.prices = gen_prices(season, seed, 0, 24, p);
  day.responsiveness = {6.0, -0.4, fMax, 25.0};
  Scenario s = window(day, start, hours);
  s.label = "seeded T=" + std::to_string(hours) + " seed=" + std::to_string(seed) + " (" +
            to_string(season) + std::to_string(variant) + ", fMax " +
            mip::format_number(fMax) + ", from hour " + std::to_string(start + 1) + ")";
  return s;
}

// ---------------------------------------------------------------------------
// Scenario bundles: profiles.csv, cem.csv, prices.csv, meta.json

inline void write_bundle(const std::string& dir, const Scenario& s, long long firstHour = 0,
                         const nlohmann::json& extraMeta = nlohmann::json::object()) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string profiles = "hour,hourly_fmax,block_fmax\n";
  for (std::size_t t = 0; t < s.hours(); ++t) {
    profiles += std::to_string(t + 1) + "," + mip::format_number(s.hourModel.profile[t]) + "," +
                mip::format_number(s.blockModel.profile[t]) + "\n";
  }
  mip::write_text_file((fs::path(dir) / "profiles.csv").string(), profiles);
  std::string cem = "class,row,col,value\n";
  for (const auto& [cls, m] : {std::pair<std::string, const FlexibilityModel*>{"hourly", &s.hourModel},
                               {"block", &s.blockModel}}) {
    for (std::size_t i = 0; i < s.hours(); ++i) {
      for (std::size_t j = 0; j < s.hours(); ++j) {
        if (m->cem(i, j) != 0.0) {
          cem += cls + "," + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                 mip::format_number(m->cem(i, j)) + "\n";
        }
      }
    }
  }
  mip::write_text_file((fs::path(dir) / "cem.csv").string(), cem);
  mip::write_text_file((fs::path(dir) / "prices.csv").string(), prices_to_csv(s.prices, firstHour));
  nlohmann::json meta = extraMeta;
  meta["label"] = s.label;
  meta["hours"] = s.hours();
  meta["responsiveness"] = {{"a", s.responsiveness.a},
                            {"b", s.responsiveness.b},
                            {"fMax", s.responsiveness.fMax},
                            {"lambdaMax", s.responsiveness.lambdaMax}};
  mip::write_text_file((fs::path(dir) / "meta.json").string(), meta.dump(2) + "\n");
}

inline Scenario read_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  for (const char* f : {"profiles.csv", "cem.csv", "prices.csv", "meta.json"}) {
    if (!fs::exists(fs::path(dir) / f)) throw Error("scenario bundle is missing " + (fs::path(dir) / f).string());
  }
  const auto meta = nlohmann::json::parse(mip::read_text_file((fs::path(dir) / "meta.json").string()));
  Scenario s;
  s.grid.hours = meta.at("hours").get<std::size_t>();
  s.label = meta.value("label", std::string{});
  const auto& r = meta.at("responsiveness");
  s.responsiveness = {r.at("a").get<double>(), r.at("b").get<double>(), r.at("fMax").get<double>(),
                      r.at("lambdaMax").get<double>()};
  const std::size_t T = s.grid.hours;
  s.hourModel.cem = CrossElasticityMatrix(T);
  s.blockModel.cem = CrossElasticityMatrix(T);

  auto rows = [](const std::string& text, std::size_t fields, const std::string& what) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() != fields) throw ParseError(what + ": bad row '" + line + "'");
      out.push_back(std::move(cells));
    }
    return out;
  };
  auto number = [](const std::string& s, const std::string& what) {
    auto v = mip::parse_number(s);
    if (!v) throw ParseError(what + ": bad number '" + s + "'");
    return *v;
  };
  auto index = [&](const std::string& cell, const std::string& what) {
    const double v = number(cell, what);
    if (v < 1 || v > static_cast<double>(T) || v != std::floor(v)) {
      throw ParseError(what + ": hour index '" + cell + "' out of range");
    }
    return static_cast<std::size_t>(v) - 1;
  };
  const auto prof = rows(mip::read_text_file((fs::path(dir) / "profiles.csv").string()), 3, "profiles.csv");
  if (prof.size() != T) throw ParseError("profiles.csv: expected " + std::to_string(T) + " rows");
  s.hourModel.profile.values.assign(T, 0.0);
  s.blockModel.profile.values.assign(T, 0.0);
  for (const auto& row : prof) {
    const std::size_t t = index(row[0], "profiles.csv");
    s.hourModel.profile.values[t] = number(row[1], "profiles.csv");
    s.blockModel.profile.values[t] = number(row[2], "profiles.csv");
  }
  for (const auto& row : rows(mip::read_text_file((fs::path(dir) / "cem.csv").string()), 4, "cem.csv")) {
    auto& m = row[0] == "hourly" ? s.hourModel : row[0] == "block" ? s.blockModel
                                                                   : throw ParseError("cem.csv: unknown class '" + row[0] + "'");
    m.cem(index(row[1], "cem.csv"), index(row[2], "cem.csv")) = number(row[3], "cem.csv");
  }
  s.prices = parse_prices(mip::read_text_file((fs::path(dir) / "prices.csv").string()), T).prices;
  if (auto rep = validate_scenario(s); !rep.ok()) throw DomainError("bundle " + dir + ": " + rep.str());
  return s;
}

}  // namespace blockbid::scenarios
