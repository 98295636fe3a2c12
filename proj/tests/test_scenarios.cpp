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


#include <gtest/gtest.h>

#include <filesystem>

#include "blockbid/scenarios.hpp"

using namespace blockbid;
using namespace blockbid::scenarios;

namespace {

std::string data_path(const std::string& rel) {
  return std::string(BLOCKBID_SOURCE_DIR) + "/data/" + rel;
}

std::string price_csv(std::size_t rows) {
  std::string text = "hour_start_iso8601,price_eur_per_mwh\n";
  for (std::size_t h = 0; h < rows; ++h) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "2021-01-01T%02zu:00,%zu.5\n", h, 40 + h);
    text += buf;
  }
  return text;
}

}  // namespace

TEST(Profiles, Deterministic) {
  for (auto season : all_seasons()) {
    for (auto cls : {FlexClass::Hourly, FlexClass::Block}) {
      const auto a = gen_profile(season, cls, 1, 42);
      const auto b = gen_profile(season, cls, 1, 42);
      EXPECT_EQ(a.values, b.values);
      EXPECT_NE(a.values, gen_profile(season, cls, 2, 42).values);
      for (double v : a.values) EXPECT_LE(v, 0.0);
    }
  }
}

TEST(Profiles, BlockPeakInHomeHours) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (auto season : all_seasons()) {
      const auto p = gen_profile(season, FlexClass::Block, 1 + seed % 2, seed);
      std::size_t arg = 0;
      for (std::size_t t = 1; t < 24; ++t) {
        if (std::abs(p[t]) > std::abs(p[arg])) arg = t;
      }
      const std::size_t hour = arg + 1;
      EXPECT_TRUE(hour >= 19 || hour <= 4) << "seed " << seed << " peak at hour " << hour;
    }
  }
}

TEST(Profiles, ZeroSigmaIsDeterministicMask) {
  SyntheticParams p;
  p.sigma = 0.0;
  const auto prof = gen_profile(Season::Winter, FlexClass::Block, 1, 7, 24, p);
  for (std::size_t t = 0; t < 24; ++t) {
    EXPECT_DOUBLE_EQ(prof[t], -p.blockScale[1] * diurnal_mask(Season::Winter, FlexClass::Block, t + 1));
  }
  EXPECT_EQ(prof.values, gen_profile(Season::Winter, FlexClass::Block, 1, 8, 24, p).values);
}

TEST(Cem, StructureAndRowSums) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto A = gen_cem(24, seed);
    for (std::size_t i = 0; i < 24; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < 24; ++j) {
        if (j >= i) {
          ASSERT_EQ(A(i, j), 0.0);
        } else {
          ASSERT_LE(A(i, j), 0.0);
        }
        sum += std::abs(A(i, j));
      }
      ASSERT_LE(sum, 1.0 + 1e-12) << "seed " << seed << " row " << i;
    }
  }
}

TEST(Cem, Deterministic) {
  const auto a = gen_cem(12, 5), b = gen_cem(12, 5), c = gen_cem(12, 6);
  bool differ = false;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      EXPECT_EQ(a(i, j), b(i, j));
      differ = differ || a(i, j) != c(i, j);
    }
  }
  EXPECT_TRUE(differ);
  EXPECT_THROW(gen_cem(0, 1), DomainError);
}

TEST(Prices, ParsesValidFile) {
  const auto f = parse_prices(price_csv(24));
  EXPECT_EQ(f.prices.size(), 24u);
  EXPECT_EQ(f.prices[0], 40.5);
  const auto one = parse_prices("2021-01-01T00:00,50.12\n", 1);
  EXPECT_EQ(one.prices[0], 50.12);
}

TEST(Prices, RowCount) {
  try {
    parse_prices(price_csv(23));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("expected 24 rows"), std::string::npos);
  }
}

TEST(Prices, RejectsBadRows) {
  auto text = price_csv(24);
  EXPECT_THROW(parse_prices(text.replace(text.find("41.5"), 4, "abc")), ParseError);
  std::string dup = "2021-01-01T00:00,1\n2021-01-01T00:00,2\n";
  EXPECT_THROW(parse_prices(dup, 2), ParseError);
  std::string gap = "2021-01-01T00:00,1\n2021-01-01T02:00,2\n";
  EXPECT_THROW(parse_prices(gap, 2), ParseError);
  EXPECT_THROW(parse_prices("2021-13-01T00:00,1\n", 1), ParseError);
  EXPECT_THROW(load_prices("/no/such/prices.csv"), Error);
}

TEST(Prices, CsvRoundTrip) {
  const auto p = gen_prices(Season::Spring, 3);
  const long long first = parse_hour_stamp("2021-04-14T00:00", 0);
  const auto back = parse_prices(prices_to_csv(p, first));
  EXPECT_EQ(back.prices.values, p.values);
  EXPECT_EQ(back.firstHour, first);
  EXPECT_EQ(format_hour_stamp(first + 25), "2021-04-15T01:00");
}

TEST(Prices, ShippedFixturesLoad) {
  for (const char* name : {"autumn_1", "autumn_2", "winter_1", "winter_2", "spring_1", "spring_2",
                           "summer_1", "summer_2"}) {
    const auto p = load_prices(data_path(std::string("prices/") + name + ".csv"));
    EXPECT_EQ(p.size(), 24u);
    for (double v : p.values) EXPECT_GT(v, 0.0);
  }
}

TEST(Suite, FullSizeAndLabels) {
  const auto cfg = load_suite_config(data_path("suite.json"));
  const auto suite = build_suite(cfg);
  ASSERT_EQ(suite.size(), 48u);
  EXPECT_EQ(suite.front().scenario.label, "Autumn1, Optimistic, Energy price 1");
  for (const auto& e : suite) EXPECT_TRUE(validate_scenario(e.scenario).ok()) << e.scenario.label;
}

TEST(Suite, DropSeason) {
  auto cfg = load_suite_config(data_path("suite.json"));
  cfg.seasons.erase(cfg.seasons.begin() + 2);
  cfg.priceFiles.erase(cfg.priceFiles.begin() + 2);
  EXPECT_EQ(build_suite(cfg).size(), 36u);
}

TEST(Suite, CardinalityFormula) {
  auto cfg = load_suite_config(data_path("suite.json"));
  cfg.seasons = {Season::Winter};
  cfg.priceFiles = {cfg.priceFiles[1]};
  cfg.variants = {2};
  cfg.clusters.pop_back();
  EXPECT_EQ(build_suite(cfg).size(), 1u * 1u * 2u * 2u);
}

TEST(Suite, DeterministicPerSeed) {
  const auto cfg = load_suite_config(data_path("suite.json"));
  const auto a = build_suite(cfg), b = build_suite(cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].scenario.hourModel.profile.values, b[i].scenario.hourModel.profile.values);
  }
}

TEST(Suite, MissingPriceFile) {
  auto cfg = load_suite_config(data_path("suite.json"));
  cfg.priceFiles[0][0] = "/no/such/file.csv";
  EXPECT_THROW(build_suite(cfg), Error);
}

TEST(Suite, Window) {
  auto cfg = load_suite_config(data_path("suite.json"));
  cfg.windowStart = 16;
  cfg.windowLength = 8;
  const auto suite = build_suite(cfg);
  EXPECT_EQ(suite[0].scenario.hours(), 8u);
  const auto full = window(suite[0].scenario, 0, 8);
  EXPECT_THROW(window(suite[0].scenario, 4, 8), DimensionError);
  EXPECT_EQ(full.prices.values, suite[0].scenario.prices.values);
}

TEST(Seeded, ValidAndDeterministic) {
  for (std::size_t T : {6u, 8u, 10u, 24u}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto s = seeded_scenario(T, seed);
      EXPECT_EQ(s.hours(), T);
      EXPECT_TRUE(validate_scenario(s).ok()) << s.label;
      EXPECT_EQ(s.prices.values, seeded_scenario(T, seed).prices.values);
    }
  }
  EXPECT_THROW(seeded_scenario(25, 1), DomainError);
}

TEST(Bundle, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "blockbid_test_bundle";
  std::filesystem::remove_all(dir);
  const auto s = seeded_scenario(8, 3);
  write_bundle(dir.string(), s, parse_hour_stamp("2021-06-01T00:00", 0));
  const auto back = read_bundle(dir.string());
  EXPECT_EQ(back.label, s.label);
  EXPECT_EQ(back.prices.values, s.prices.values);
  EXPECT_EQ(back.hourModel.profile.values, s.hourModel.profile.values);
  EXPECT_EQ(back.blockModel.profile.values, s.blockModel.profile.values);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(back.hourModel.cem(i, j), s.hourModel.cem(i, j));
  }
  EXPECT_EQ(back.responsiveness.fMax, s.responsiveness.fMax);
  std::filesystem::remove(dir / "cem.csv");
  EXPECT_THROW(read_bundle(dir.string()), Error);
  std::filesystem::remove_all(dir);
}
