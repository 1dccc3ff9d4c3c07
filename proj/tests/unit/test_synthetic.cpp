#include "tempora/error.hpp"
#include "tempora/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace tempora;

namespace {

struct Means {
  double e = 0, ell = 0, delta = 0;
};

Means means(const MethodTrace& t) {
  Means m;
  for (const auto& r : t.records) {
    m.e += to_millis(r.e);
    m.ell += to_millis(r.ell);
  }
  m.e /= static_cast<double>(t.size());
  m.ell /= static_cast<double>(t.size());
  m.delta = m.e + m.ell;
  return m;
}

}  // namespace

TEST(Synthetic, DeterministicForSeed) {
  const auto p = preset("eta-table2");
  EXPECT_EQ(gen_synthetic(p, 3, 7), gen_synthetic(p, 3, 7));
  EXPECT_NE(gen_synthetic(p, 50, 7), gen_synthetic(p, 50, 8));
}

TEST(Synthetic, StandardPresetHasNoExtrinsicSpan) {
  const auto t = gen_synthetic(preset("standard-table2"), 11715, 1);
  const auto m = means(t);
  EXPECT_NEAR(m.e, 38.7, 0.05);
  EXPECT_EQ(m.ell, 0.0);
}

TEST(Synthetic, SarDeltaRatio) {
  const auto t = gen_synthetic(preset("sar-table2"), 10000, 1);
  EXPECT_NEAR(means(t).delta / to_millis(t.lambda), 4.89, 0.05);
}

TEST(Synthetic, AllPresetsWithinTwoPercent) {
  // Reference mean intrinsic and extrinsic spans in ms.
  const std::map<std::string, std::pair<double, double>> expected{
      {"standard-table2", {38.7, 0.0}}, {"adabn-table2", {41.1, 0.0}},  {"lame-table2", {40.3, 0.0}},
      {"neo-table2", {38.8, 0.0}},      {"tent-table2", {41.1, 56.1}},  {"eta-table2", {41.1, 56.6}},
      {"shot-im-table2", {41.1, 79.8}}, {"sar-table2", {41.1, 154.1}},
  };
  ASSERT_EQ(preset_names().size(), expected.size());
  for (const auto& name : preset_names()) {
    ASSERT_TRUE(expected.count(name)) << name;
    const auto t = gen_synthetic(preset(name), 11715, 1);
    const auto m = means(t);
    const auto [e, ell] = expected.at(name);
    EXPECT_NEAR(m.e, e, 0.02 * e) << name;
    EXPECT_NEAR(m.ell, ell, 0.02 * ell) << name;
    EXPECT_NEAR(m.delta, e + ell, 0.02 * (e + ell)) << name;
    EXPECT_EQ(t.lambda, Duration{39'900'000});
  }
}

TEST(Synthetic, UnknownPresetListsNames) {
  try {
    preset("bogus");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("eta-table2"), std::string::npos);
  }
}

TEST(Synthetic, AccuracyCurveShapes) {
  AccuracyCurve c{AccuracyCurve::Shape::linear_ramp, 0.2, 0.6, 0};
  EXPECT_NEAR(c.at(1, 5), 0.2, 1e-12);
  EXPECT_NEAR(c.at(5, 5), 0.6, 1e-12);
  AccuracyCurve s{AccuracyCurve::Shape::step, 0.4, 0.1, 3};
  EXPECT_EQ(s.at(3, 10), 0.4);
  EXPECT_EQ(s.at(4, 10), 0.1);
}

TEST(Synthetic, FrozenRunCoversTail) {
  const auto p = preset("tent-table2");
  const auto t = gen_synthetic(p, 100, 3);
  const auto f = gen_frozen_run(p, t, 18, 3);
  EXPECT_EQ(f.cutoff_m, 18u);
  ASSERT_EQ(f.records.size(), 82u);
  EXPECT_EQ(f.records.front().index, 19u);
  for (const auto& r : f.records) EXPECT_EQ(r.ell, Duration{0});
}
