#include "tempora/trace.hpp"

#include "tempora/error.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tempora {

const char* to_string(ValidationKind kind) {
  switch (kind) {
    case ValidationKind::missing_field: return "missing_field";
    case ValidationKind::malformed_value: return "malformed_value";
    case ValidationKind::negative_value: return "negative_value";
    case ValidationKind::non_contiguous_index: return "non_contiguous_index";
    case ValidationKind::correct_exceeds_batch: return "correct_exceeds_batch";
    case ValidationKind::non_positive_batch: return "non_positive_batch";
    case ValidationKind::mixed_batch_size: return "mixed_batch_size";
    case ValidationKind::header: return "header";
    case ValidationKind::coverage: return "coverage";
  }
  return "unknown";
}

namespace {

void validate_record(const BatchRecord& r, std::size_t row, std::size_t expected_index) {
  if (r.index != expected_index) {
    throw ValidationError(ValidationKind::non_contiguous_index, row, "index",
                          "non-contiguous index at row " + std::to_string(row) + " (expected " +
                              std::to_string(expected_index) + ", got " + std::to_string(r.index) + ")");
  }
  if (r.e.count() < 0) {
    throw ValidationError(ValidationKind::negative_value, row, "e_ms",
                          "negative value for e_ms at row " + std::to_string(row));
  }
  if (r.ell.count() < 0) {
    throw ValidationError(ValidationKind::negative_value, row, "ell_ms",
                          "negative value for ell_ms at row " + std::to_string(row));
  }
  if (r.batch_size == 0) {
    throw ValidationError(ValidationKind::non_positive_batch, row, "batch_size",
                          "batch_size must be positive at row " + std::to_string(row));
  }
  if (r.correct > r.batch_size) {
    throw ValidationError(ValidationKind::correct_exceeds_batch, row, "correct",
                          "correct exceeds batch_size at row " + std::to_string(row));
  }
}

}  // namespace

MethodTrace MethodTrace::make(std::string method, Duration lambda, std::string corruption,
                              std::vector<BatchRecord> records, bool relaxed_sizes) {
  if (lambda.count() <= 0) {
    throw ValidationError(ValidationKind::header, 0, "lambda_ms", "lambda_ms must be positive");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    validate_record(records[i], i + 1, i + 1);
    if (!relaxed_sizes && records[i].batch_size != records.front().batch_size) {
      throw ValidationError(ValidationKind::mixed_batch_size, i + 1, "batch_size",
                            "batch_size differs from row 1 at row " + std::to_string(i + 1));
    }
  }
  MethodTrace t;
  t.method = std::move(method);
  t.lambda = lambda;
  t.corruption = std::move(corruption);
  t.relaxed_sizes = relaxed_sizes;
  t.records = std::move(records);
  return t;
}

FrozenRun FrozenRun::make(std::size_t cutoff_m, std::size_t n, std::vector<BatchRecord> records) {
  if (cutoff_m > n) {
    throw ValidationError(ValidationKind::coverage, 0, "cutoff_m",
                          "cutoff_m " + std::to_string(cutoff_m) + " exceeds stream length " + std::to_string(n));
  }
  if (records.size() != n - cutoff_m) {
    throw ValidationError(ValidationKind::coverage, 0, "records",
                          "frozen run for cutoff " + std::to_string(cutoff_m) + " must cover " +
                              std::to_string(n - cutoff_m) + " batches, has " + std::to_string(records.size()));
  }
  for (std::size_t i = 0; i < records.size(); ++i) validate_record(records[i], i + 1, cutoff_m + i + 1);
  return FrozenRun{cutoff_m, std::move(records)};
}

void TraceBundle::add_frozen(FrozenRun run) {
  const std::size_t n = adapted.size();
  if (run.cutoff_m > n || run.records.size() != n - run.cutoff_m ||
      (!run.records.empty() && (run.records.front().index != run.cutoff_m + 1 || run.records.back().index != n))) {
    throw ValidationError(ValidationKind::coverage, 0, "cutoff_m",
                          "frozen run for cutoff " + std::to_string(run.cutoff_m) +
                              " does not cover batches m+1..N of a " + std::to_string(n) + "-batch trace");
  }
  const std::size_t m = run.cutoff_m;
  frozen_runs.insert_or_assign(m, std::move(run));
}

double accuracy_mean(std::span<const BatchRecord> records, Weighting weighting) {
  if (records.empty()) throw std::invalid_argument("accuracy_mean of an empty batch sequence");
  if (weighting == Weighting::per_batch) {
    double sum = 0.0;
    for (const auto& r : records) sum += r.accuracy();
    return sum / static_cast<double>(records.size());
  }
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  for (const auto& r : records) {
    correct += r.correct;
    total += r.batch_size;
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

Duration estimate_lambda(std::span<const Duration> samples, double k_sigma) {
  if (samples.empty()) throw std::invalid_argument("estimate_lambda needs at least one latency sample");
  if (!(k_sigma >= 0.0)) throw std::invalid_argument("k_sigma must be non-negative");
  // Sums in long double: 11k samples of ~1e8 ns stay exact well past 2^64.
  long double sum = 0;
  for (auto s : samples) sum += static_cast<long double>(s.count());
  const long double n = static_cast<long double>(samples.size());
  const long double mean = sum / n;
  long double ss = 0;
  for (auto s : samples) {
    const long double dev = static_cast<long double>(s.count()) - mean;
    ss += dev * dev;
  }
  const long double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0L;
  return Duration{std::llround(mean + static_cast<long double>(k_sigma) * sd)};
}

LatencySummary summarize_latency(const MethodTrace& trace) {
  LatencySummary s;
  if (trace.records.empty()) return s;
  std::int64_t e = 0;
  std::int64_t ell = 0;
  for (const auto& r : trace.records) {
    e += r.e.count();
    ell += r.ell.count();
  }
  const double n = static_cast<double>(trace.size());
  s.mean_e_ms = static_cast<double>(e) / n / kNanosPerMilli;
  s.mean_ell_ms = static_cast<double>(ell) / n / kNanosPerMilli;
  s.mean_delta_ms = s.mean_e_ms + s.mean_ell_ms;
  return s;
}

}  // namespace tempora
