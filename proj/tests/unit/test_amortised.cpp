#include "tempora/amortised.hpp"
#include "tempora/error.hpp"
#include "tempora/oracle.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace tempora;
using tempora::testing::ms;

namespace {

const Duration kLambda{39'900'000};

/// N batches whose first m overheads fit a 1 s budget exactly; accuracies are
/// thousandths of 10000-sample batches.
TraceBundle cutoff_bundle(std::size_t n, std::size_t m, std::uint32_t adapt_correct, std::uint32_t frozen_correct,
                          bool with_run = true) {
  const Duration c{1'000'000'000 / static_cast<std::int64_t>(m)};
  std::vector<BatchRecord> r;
  for (std::size_t i = 1; i <= n; ++i) r.push_back({i, kLambda + c, Duration{0}, 10000, adapt_correct});
  TraceBundle b{MethodTrace::make("M", kLambda, "c", r), {}};
  if (with_run) {
    std::vector<BatchRecord> f;
    for (std::size_t i = m + 1; i <= n; ++i) f.push_back({i, kLambda, Duration{0}, 10000, frozen_correct});
    b.add_frozen(FrozenRun::make(m, n, f));
  }
  return b;
}

}  // namespace

TEST(Amortised, Overheads) {
  const auto t = MethodTrace::make("M", kLambda, "c",
                                   {{1, kLambda, ms(0), 64, 1},
                                    {2, Duration{41'100'000}, Duration{56'600'000}, 64, 1},
                                    {3, Duration{38'700'000}, ms(0), 64, 1}});
  const auto c = overheads(t);
  EXPECT_EQ(c[0], Duration{0});
  EXPECT_EQ(c[1], Duration{57'800'000});
  EXPECT_EQ(c[2], Duration{0});
  EXPECT_EQ(overheads(t, kLambda, OverheadMode::raw)[2], Duration{-1'200'000});
}

TEST(Amortised, Cutoff) {
  const std::vector<Duration> c{ms(300), ms(400), ms(500)};
  EXPECT_EQ(cutoff(c, ms(800)), 2u);
  EXPECT_EQ(cutoff(c, Duration{0}), 0u);
  EXPECT_EQ(cutoff(c, ms(1200)), 3u);
  EXPECT_EQ(cutoff(c, ms(5000)), 3u);
  const std::vector<Duration> zeros(5, Duration{0});
  EXPECT_EQ(cutoff(zeros, Duration{0}), 5u);
}

TEST(Amortised, CutoffMatchesOracleAndIsMonotone) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> cd(0, 200'000'000), bd(0, 20'000'000'000);
  for (int k = 0; k < 2000; ++k) {
    std::vector<Duration> c(1 + k % 200);
    for (auto& x : c) x = Duration{cd(rng)};
    const Duration b{bd(rng)};
    EXPECT_EQ(cutoff(c, b), oracle::oracle_cutoff(c, b));
    EXPECT_LE(cutoff(c, b), cutoff(c, b + ms(100)));
  }
}

TEST(Amortised, SmallCutoffWithRetainedAccuracy) {
  const auto b = cutoff_bundle(781, 13, 3223, 3222);
  const auto r = amortised_utility(b, AmortisedConfig::make(from_seconds(1), kLambda));
  EXPECT_EQ(r.cutoff_m, 13u);
  EXPECT_NEAR(r.adapted_fraction, 0.017, 0.0005);
  EXPECT_NEAR(r.utility, 0.3222, 0.0005);
  EXPECT_EQ(r.frozen_source, FrozenSource::frozen_run);
}

TEST(Amortised, SmallCutoffWithCollapsedAccuracy) {
  const auto b = cutoff_bundle(781, 18, 3211, 10);
  const auto r = amortised_utility(b, AmortisedConfig::make(from_seconds(1), kLambda));
  EXPECT_EQ(r.cutoff_m, 18u);
  EXPECT_NEAR(r.adapted_fraction, 0.023, 0.0005);
  EXPECT_NEAR(r.utility, 0.0084, 0.0005);
}

TEST(Amortised, BudgetNeverExhausted) {
  const auto b = cutoff_bundle(50, 100, 4000, 0, false);
  const auto r = amortised_utility(b, AmortisedConfig::make(from_seconds(1), kLambda));
  EXPECT_EQ(r.cutoff_m, 50u);
  EXPECT_EQ(r.adapted_fraction, 1.0);
  EXPECT_FALSE(r.frozen_accuracy);
  EXPECT_NEAR(r.utility, 0.4, 1e-12);
  EXPECT_EQ(r.frozen_source, FrozenSource::none);
}

TEST(Amortised, ResolutionLadder) {
  auto b = cutoff_bundle(100, 10, 5000, 2000);
  // Budget of 1.5 s reaches m = 15; the run at 10 is the nearest one below.
  auto r = amortised_utility(b, AmortisedConfig::make(ms(1500), kLambda));
  EXPECT_EQ(r.cutoff_m, 15u);
  EXPECT_EQ(r.frozen_source, FrozenSource::nearest_run);
  EXPECT_EQ(r.frozen_run_cutoff, 10u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_NEAR(*r.frozen_accuracy, 0.2, 1e-12);

  // Below every run: the constant is used, and without it resolution fails.
  r = amortised_utility(b, AmortisedConfig::make(ms(500), kLambda, 0.1));
  EXPECT_EQ(r.frozen_source, FrozenSource::constant);
  EXPECT_NEAR(r.utility, 0.05 * 0.5 + 0.95 * 0.1, 1e-12);
  EXPECT_THROW(amortised_utility(b, AmortisedConfig::make(ms(500), kLambda)), ResolutionError);
}

TEST(Amortised, ParetoFrontier) {
  const std::vector<ParetoPoint> one{{from_seconds(1), 0.3, "S"}};
  EXPECT_EQ(pareto_frontier(one), one);
  const std::vector<ParetoPoint> two{{from_seconds(1), 0.32, "S"}, {from_seconds(2), 0.30, "T"}};
  EXPECT_EQ(pareto_frontier(two), (std::vector<ParetoPoint>{{from_seconds(1), 0.32, "S"}}));
  const std::vector<ParetoPoint> tie{{from_seconds(1), 0.3, "A"}, {from_seconds(1), 0.3, "B"}};
  EXPECT_EQ(pareto_frontier(tie).size(), 2u);
}
