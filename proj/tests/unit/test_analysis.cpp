#include "tempora/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

using namespace tempora;

namespace {

const std::vector<std::string> kMethods{"Standard", "AdaBN", "LAME", "NEO", "Tent", "ETA", "SHOT-IM", "SAR"};

const Scenario kRho1{Protocol::discrete, "rho", 1.0};
const Scenario kRho2{Protocol::discrete, "rho", 0.5};

}  // namespace

TEST(Rank, DescendingWithAverageTies) {
  const std::vector<double> a{0.3, 0.1, 0.2};
  EXPECT_EQ(rank(a).ranks, (std::vector<double>{1, 3, 2}));
  const std::vector<double> b{0.3, 0.3};
  EXPECT_EQ(rank(b).ranks, (std::vector<double>{1.5, 1.5}));
  const std::vector<double> c{0.5, 0.2, 0.5, 0.2, 0.9};
  EXPECT_EQ(rank(c).ranks, (std::vector<double>{2.5, 4.5, 2.5, 4.5, 1}));
}

TEST(Rank, ImpulseNoiseColumn) {
  const std::vector<double> u{2.64, 16.67, 2.24, 5.18, 31.27, 38.18, 30.81, 32.58};
  const auto r = rank(kMethods, u);
  EXPECT_EQ(r.ranks, (std::vector<double>{7, 5, 8, 6, 3, 1, 4, 2}));
  EXPECT_EQ(r.of("ETA"), 1.0);
}

TEST(Spearman, IdentityReversalAndErrors) {
  const std::vector<std::string> m{"a", "b", "c", "d"};
  const std::vector<double> up{1, 2, 3, 4}, down{4, 3, 2, 1}, flat{1, 1, 1, 1};
  EXPECT_NEAR(spearman(rank(m, up), rank(m, up)), 1.0, 1e-12);
  EXPECT_NEAR(spearman(rank(m, up), rank(m, down)), -1.0, 1e-12);
  EXPECT_THROW(spearman(rank(m, up), rank(m, flat)), std::domain_error);
  const std::vector<std::string> other{"a", "b", "c", "z"};
  EXPECT_THROW(spearman(rank(m, up), rank(other, up)), std::invalid_argument);
}

TEST(Spearman, OfflineVersusLowUtilisation) {
  const std::vector<double> offline{18.16, 31.72, 17.40, 22.14, 42.88, 48.35, 42.43, 44.14};
  const std::vector<double> rho25{18.16, 31.72, 17.40, 22.14, 42.88, 48.35, 42.43, 35.48};
  const double r = spearman(rank(kMethods, offline), rank(kMethods, rho25));
  // Hand ranking: sum of squared rank differences is 6 over 8 methods.
  const double expected = 1.0 - 6.0 * 6.0 / (8.0 * (64.0 - 1.0));
  EXPECT_NEAR(r, expected, 1e-12);
  EXPECT_NEAR(r, 0.9286, 0.0001);
}

TEST(Winners, SingleMethodEverywhere) {
  UtilityMatrix m;
  for (const auto* c : {"fog", "snow"}) {
    m.set("Only", kRho1, c, 0.1);
    m.set("Only", kRho2, c, 0.0);
  }
  for (const auto& w : winners(m)) {
    ASSERT_TRUE(w.winner);
    EXPECT_EQ(*w.winner, "Only");
  }
}

TEST(Winners, GaussianNoiseLowBudget) {
  UtilityMatrix m;
  const Scenario b1{Protocol::amortised, "B_s", 1};
  const std::vector<double> u{3.0, 16.2, 2.6, 5.2, 0.5, 0.6, 18.3, 0.3};
  for (std::size_t i = 0; i < kMethods.size(); ++i) m.set(kMethods[i], b1, "gaussian_noise", u[i]);
  const auto w = winners(m);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(*w[0].winner, "SHOT-IM");
}

TEST(Winners, TiesBreakOnLatencyThenLabel) {
  UtilityMatrix m;
  m.set("B", kRho1, "c", 0.4);
  m.set("A", kRho1, "c", 0.4);
  auto w = winners(m, {{"A", 90.0}, {"B", 40.0}});
  EXPECT_EQ(*w[0].winner, "B");
  EXPECT_TRUE(w[0].tied);
  EXPECT_EQ(w[0].tied_with, (std::vector<std::string>{"A"}));
  w = winners(m);
  EXPECT_EQ(*w[0].winner, "A");
}

TEST(Winners, AllAbsentCellHasNoWinner) {
  UtilityMatrix m;
  m.set_absent("A", kRho1, "c", "provider failed");
  const auto w = winners(m);
  EXPECT_FALSE(w[0].winner);
  EXPECT_EQ(m.absent_reason(0, 0, 0), "provider failed");
  EXPECT_EQ(m.absent_count(), 1u);
}

TEST(Insolvency, Thresholds) {
  auto i = insolvency_threshold(0.308, 0.410);
  EXPECT_NEAR(i.required, 0.751, 0.0005);
  EXPECT_FALSE(i.insolvent);
  i = insolvency_threshold(0.308, 0.206);
  EXPECT_NEAR(i.required, 1.495, 0.0005);
  EXPECT_TRUE(i.insolvent);
  EXPECT_EQ(insolvency_threshold(0.3, 1.0).required, 0.3);
  EXPECT_THROW(insolvency_threshold(0.3, 0.0), std::invalid_argument);
  EXPECT_THROW(insolvency_threshold(0.3, 1.5), std::invalid_argument);
}

TEST(WinStats, AlwaysWinning) {
  UtilityMatrix m;
  m.set("Standard", kRho1, "c", 0.1);
  m.set("X", kRho1, "c", 0.3);
  m.set("Standard", kRho2, "c", 0.1);
  m.set("X", kRho2, "c", 0.2);
  const auto s = win_stats(m, "X");
  EXPECT_EQ(s.cells, 2u);
  EXPECT_EQ(s.wins, 2u);
  EXPECT_EQ(s.win_rate, 1.0);
  EXPECT_EQ(s.mean_yielded, 0.0);
  EXPECT_EQ(s.sub_baseline, 0u);
}

TEST(WinStats, TwoCellArithmetic) {
  UtilityMatrix m;
  m.set("Standard", kRho1, "c", 0.05);
  m.set("X", kRho1, "c", 0.30);
  m.set("Standard", kRho2, "c", 0.20);
  m.set("X", kRho2, "c", 0.10);
  const auto s = win_stats(m, "X");
  EXPECT_EQ(s.win_rate, 0.5);
  EXPECT_NEAR(s.mean_yielded, 0.50, 1e-12);
  EXPECT_EQ(s.sub_baseline, 1u);
  EXPECT_THROW(win_stats(m, "nobody"), std::invalid_argument);
}

TEST(WinStats, ReferenceWinnerGrid) {
  // Winner letter per corruption across 16 scenarios (5 rho, 5 T, 6 B); the
  // winning cell gets utility 1 and every other method 0.
  const std::vector<std::string> grid{
      "AEEEEAEEEESSSEEE", "AEEEEAEEEESSSEEE", "AEEEEAEEEESSSEEE", "NNEEENNEEENNNEEE", "AEEEEAEEEEASSEEE",
      "AEEEEAAEEESSSEEE", "AAEEEAAEEEASSEEE", "AAEEEAAEEESSSEEE", "AAEEEAAEEESSSEEE", "AAEEEAAAEEASSEEE",
      "AAAEENAAAASSSEEE", "EEEEEAEEEEAAEEEE", "AAEEEAAAEEASSEEE", "AAEEEAAAEESSSEEE", "AAEEENAEEESSSEEE",
  };
  const std::map<char, std::string> letter{{'A', "AdaBN"}, {'E', "ETA"}, {'N', "NEO"}, {'S', "SHOT-IM"}};
  std::vector<Scenario> scenarios;
  for (double r : {1.0, 0.7, 0.5, 0.35, 0.25}) scenarios.push_back({Protocol::discrete, "rho", r});
  for (double t : {50, 100, 200, 400, 1000}) scenarios.push_back({Protocol::continuous, "T_ms", t});
  for (double b : {1, 2, 4, 8, 16, 32}) scenarios.push_back({Protocol::amortised, "B_s", b});
  UtilityMatrix m;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      for (const auto& method : kMethods) {
        m.set(method, scenarios[s], "c" + std::to_string(c), letter.at(grid[c][s]) == method ? 1.0 : 0.0);
      }
    }
  }
  const auto s = win_stats(m, "ETA");
  EXPECT_EQ(s.cells, 240u);
  EXPECT_EQ(s.wins, 141u);
  EXPECT_NEAR(s.win_rate, 0.588, 0.0005);
  EXPECT_EQ(win_stats(m, "AdaBN").wins, 55u);
  EXPECT_EQ(win_stats(m, "NEO").wins, 9u);
  EXPECT_EQ(win_stats(m, "SHOT-IM").wins, 35u);
}

TEST(OfflineRankCorrelation, ThreeAggregations) {
  UtilityMatrix m;
  const std::vector<double> offline{18.16, 31.72, 17.40, 22.14, 42.88, 48.35, 42.43, 44.14};
  const std::vector<double> rho25{18.16, 31.72, 17.40, 22.14, 42.88, 48.35, 42.43, 35.48};
  const Scenario s{Protocol::discrete, "rho", 0.25};
  for (std::size_t i = 0; i < kMethods.size(); ++i) {
    for (const auto* c : {"x", "y"}) {
      m.set_offline(kMethods[i], c, offline[i] / 100);
      m.set(kMethods[i], s, c, rho25[i] / 100);
    }
  }
  const auto rows = offline_rank_correlation(m);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.r_s);
    EXPECT_NEAR(*r.r_s, 0.9286, 0.0001) << to_string(r.aggregation) << " " << r.corruption;
  }
}

TEST(Scenario, LabelsAndParsing) {
  EXPECT_EQ(kRho2.parameter_text(), "rho=0.5");
  EXPECT_EQ(kRho2.label(), "discrete rho=0.5");
  EXPECT_EQ(parse_scenario("amortised", "B_s=4"), (Scenario{Protocol::amortised, "B_s", 4}));
  EXPECT_EQ(parse_protocol("continuous"), Protocol::continuous);
}
