#include "tempora/time.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tempora;

TEST(Decimal, ParsesMillisecondsExactly) {
  EXPECT_EQ(parse_millis("38.7").count(), 38'700'000);
  EXPECT_EQ(parse_millis("0").count(), 0);
  EXPECT_EQ(parse_millis("39.9").count(), 39'900'000);
  EXPECT_EQ(parse_millis("0.000001").count(), 1);
  EXPECT_EQ(parse_millis("1e3").count(), 1'000'000'000);
  EXPECT_EQ(parse_millis("-2.5").count(), -2'500'000);
  EXPECT_EQ(parse_millis("+12").count(), 12'000'000);
  EXPECT_EQ(parse_seconds("1.5").count(), 1'500'000'000);
  EXPECT_EQ(parse_seconds("32").count(), 32'000'000'000);
}

TEST(Decimal, RoundsExcessDigitsHalfAwayFromZero) {
  EXPECT_EQ(parse_millis("0.0000005").count(), 1);
  EXPECT_EQ(parse_millis("0.0000004999").count(), 0);
  EXPECT_EQ(parse_millis("-0.0000005").count(), -1);
  EXPECT_EQ(parse_millis("1.2345678").count(), 1'234'568);
}

TEST(Decimal, RejectsMalformedText) {
  for (const char* bad : {"", "abc", "1.2.3", "--1", "1e", "1,5", " 1", "."}) {
    EXPECT_THROW(parse_millis(bad), std::invalid_argument) << bad;
  }
  EXPECT_THROW(parse_millis("1e30"), std::out_of_range);
}

TEST(Decimal, FormatsShortestExactForm) {
  EXPECT_EQ(format_millis(Duration{38'700'000}), "38.7");
  EXPECT_EQ(format_millis(Duration{0}), "0");
  EXPECT_EQ(format_millis(Duration{1}), "0.000001");
  EXPECT_EQ(format_millis(Duration{-1'500'000}), "-1.5");
  EXPECT_EQ(format_seconds(from_seconds(4)), "4");
}

TEST(Decimal, RoundTripsEverySixDecimalValue) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> dist(-1'000'000'000'000, 1'000'000'000'000);
  for (int i = 0; i < 20000; ++i) {
    const Duration d{dist(rng)};
    EXPECT_EQ(parse_millis(format_millis(d)), d);
  }
}

TEST(Decimal, ConvertsRealMilliseconds) {
  EXPECT_EQ(round_millis(39.9).count(), 39'900'000);
  EXPECT_DOUBLE_EQ(to_millis(Duration{38'700'000}), 38.7);
  EXPECT_DOUBLE_EQ(to_seconds(from_seconds(2)), 2.0);
}
