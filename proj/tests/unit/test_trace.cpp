#include "tempora/error.hpp"
#include "tempora/trace.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tempora;
using tempora::testing::ms;

namespace {

BatchRecord rec(std::size_t i, Duration e, Duration ell, std::uint32_t size, std::uint32_t correct) {
  return {i, e, ell, size, correct};
}

ValidationError make_error(std::vector<BatchRecord> records, bool relaxed = false) {
  try {
    MethodTrace::make("M", ms(40), "c", std::move(records), relaxed);
  } catch (const ValidationError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a validation error";
  return ValidationError(ValidationKind::header, 0, "", "");
}

}  // namespace

TEST(BatchRecord, DerivesDeltaAndAccuracy) {
  const auto r = rec(1, Duration{38'700'000}, Duration{0}, 64, 12);
  EXPECT_EQ(r.delta().count(), 38'700'000);
  EXPECT_DOUBLE_EQ(r.accuracy(), 0.1875);
}

TEST(MethodTrace, AcceptsContiguousUniformRecords) {
  std::vector<BatchRecord> records;
  for (std::size_t i = 1; i <= 781; ++i) records.push_back(rec(i, ms(40), ms(0), 64, 10));
  const auto t = MethodTrace::make("ETA", ms(40), "fog", records);
  EXPECT_EQ(t.size(), 781u);
  EXPECT_EQ(t.at(781).index, 781u);
}

TEST(MethodTrace, ValidationErrorsNameRowAndField) {
  auto e = make_error({rec(1, ms(1), ms(0), 64, 1), rec(3, ms(1), ms(0), 64, 1)});
  EXPECT_EQ(e.kind(), ValidationKind::non_contiguous_index);
  EXPECT_EQ(e.row(), 2u);
  EXPECT_NE(std::string(e.what()).find("non-contiguous index at row 2"), std::string::npos);

  e = make_error({rec(1, ms(-1), ms(0), 64, 1)});
  EXPECT_EQ(e.kind(), ValidationKind::negative_value);
  EXPECT_EQ(e.field(), "e_ms");

  e = make_error({rec(1, ms(1), ms(-1), 64, 1)});
  EXPECT_EQ(e.field(), "ell_ms");

  e = make_error({rec(1, ms(1), ms(0), 64, 65)});
  EXPECT_EQ(e.kind(), ValidationKind::correct_exceeds_batch);
  EXPECT_EQ(e.field(), "correct");

  e = make_error({rec(1, ms(1), ms(0), 0, 0)});
  EXPECT_EQ(e.kind(), ValidationKind::non_positive_batch);

  e = make_error({rec(1, ms(1), ms(0), 64, 1), rec(2, ms(1), ms(0), 16, 1)});
  EXPECT_EQ(e.kind(), ValidationKind::mixed_batch_size);
  EXPECT_EQ(e.row(), 2u);
}

TEST(MethodTrace, RelaxedSizesAllowOddFinalBatch) {
  EXPECT_NO_THROW(MethodTrace::make("M", ms(40), "c", {rec(1, ms(1), ms(0), 64, 1), rec(2, ms(1), ms(0), 16, 1)}, true));
}

TEST(MethodTrace, RejectsNonPositiveLambda) {
  EXPECT_THROW(MethodTrace::make("M", Duration{0}, "c", {}), ValidationError);
}

TEST(FrozenRun, CoverageMustMatchCutoff) {
  EXPECT_NO_THROW(FrozenRun::make(2, 4, {rec(3, ms(1), ms(0), 64, 1), rec(4, ms(1), ms(0), 64, 1)}));
  EXPECT_THROW(FrozenRun::make(2, 4, {rec(3, ms(1), ms(0), 64, 1)}), ValidationError);
  EXPECT_THROW(FrozenRun::make(2, 4, {rec(2, ms(1), ms(0), 64, 1), rec(3, ms(1), ms(0), 64, 1)}), ValidationError);
  EXPECT_THROW(FrozenRun::make(5, 4, {}), ValidationError);

  TraceBundle b{tempora::testing::constant_trace(4, ms(10)), {}};
  EXPECT_NO_THROW(b.add_frozen(FrozenRun::make(4, 4, {})));
  EXPECT_THROW(b.add_frozen(FrozenRun::make(1, 3, {rec(2, ms(1), ms(0), 64, 1), rec(3, ms(1), ms(0), 64, 1)})),
               ValidationError);
}

TEST(AccuracyMean, EqualSizesAgreeAcrossWeightings) {
  std::vector<BatchRecord> r{rec(1, ms(1), ms(0), 10, 2), rec(2, ms(1), ms(0), 10, 4)};
  EXPECT_NEAR(accuracy_mean(r, Weighting::per_batch), 0.3, 1e-15);
  EXPECT_NEAR(accuracy_mean(r, Weighting::per_sample), 0.3, 1e-15);
}

TEST(AccuracyMean, WeightingsDivergeOnUnequalSizes) {
  std::vector<BatchRecord> r{rec(1, ms(1), ms(0), 64, 64), rec(2, ms(1), ms(0), 16, 0)};
  EXPECT_DOUBLE_EQ(accuracy_mean(r, Weighting::per_batch), 0.5);
  EXPECT_DOUBLE_EQ(accuracy_mean(r, Weighting::per_sample), 0.8);
}

TEST(AccuracyMean, UniformSizesAgreeOnRandomTraces) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto t = tempora::testing::random_trace(rng, 200, ms(1), ms(100), ms(40));
    EXPECT_NEAR(accuracy_mean(t.records, Weighting::per_batch), accuracy_mean(t.records, Weighting::per_sample), 1e-12);
  }
}

TEST(AccuracyMean, EmptyInputThrows) {
  EXPECT_THROW(accuracy_mean({}), std::invalid_argument);
}

TEST(EstimateLambda, ZeroVarianceReturnsTheSample) {
  const std::vector<Duration> s(5, ms(40));
  EXPECT_EQ(estimate_lambda(s, 6.0), ms(40));
}

TEST(EstimateLambda, SixSigmaProvisionReachesThirtyNinePointNine) {
  // Mean 38.67 ms with a sample standard deviation of exactly 0.205 ms.
  const Duration m{38'670'000}, a{205'000};
  const std::vector<Duration> s{m - a, m - a, m, m + a, m + a};
  EXPECT_EQ(estimate_lambda(s, 6.0), Duration{39'900'000});
  // Independent arithmetic: (39.9 - 38.67) / 6 == 0.205.
  EXPECT_NEAR((39.9 - 38.67) / 6.0, 0.205, 1e-12);
}

TEST(EstimateLambda, ZeroSigmaIsTheMean) {
  const std::vector<Duration> s{ms(38), ms(40)};
  EXPECT_EQ(estimate_lambda(s, 0.0), ms(39));
}

TEST(EstimateLambda, RejectsEmptyAndNegativeK) {
  EXPECT_THROW(estimate_lambda({}, 6.0), std::invalid_argument);
  const std::vector<Duration> s{ms(38)};
  EXPECT_THROW(estimate_lambda(s, -1.0), std::invalid_argument);
}

TEST(LatencySummary, MeansOfSplit) {
  const auto t = MethodTrace::make("M", ms(40), "c", {rec(1, ms(40), ms(50), 64, 1), rec(2, ms(42), ms(60), 64, 1)});
  const auto s = summarize_latency(t);
  EXPECT_DOUBLE_EQ(s.mean_e_ms, 41.0);
  EXPECT_DOUBLE_EQ(s.mean_ell_ms, 55.0);
  EXPECT_DOUBLE_EQ(s.mean_delta_ms, 96.0);
}

TEST(AccuracyMean, OfflineTraceFixture) {
  // A 781-batch offline trace at 4835 correct of 10000 per batch.
  std::vector<BatchRecord> r;
  for (std::size_t i = 1; i <= 781; ++i) r.push_back(rec(i, Duration{97'700'000}, Duration{0}, 10000, 4835));
  const auto t = MethodTrace::make("ETA", Duration{39'900'000}, "mean", r);
  EXPECT_NEAR(accuracy_mean(t.records), 0.4835, 1e-12);
}
