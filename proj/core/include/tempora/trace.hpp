#pragma once

#include "tempora/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tempora {

/// One batch of the stream: its timing split and correctness counts.
struct BatchRecord {
  std::size_t index = 0;   // 1-based
  Duration e{0};           // pickup -> prediction emission
  Duration ell{0};         // emission -> pipeline release
  std::uint32_t batch_size = 0;
  std::uint32_t correct = 0;

  Duration delta() const { return e + ell; }
  double accuracy() const { return static_cast<double>(correct) / static_cast<double>(batch_size); }

  friend bool operator==(const BatchRecord&, const BatchRecord&) = default;
};

/// A method's full stream trace. Construct through `MethodTrace::make`, which
/// validates; the fields are read-only afterwards by convention.
struct MethodTrace {
  std::string method;
  Duration lambda{0};
  std::string corruption;
  bool relaxed_sizes = false;
  std::vector<BatchRecord> records;

  std::size_t size() const { return records.size(); }
  const BatchRecord& at(std::size_t index) const { return records.at(index - 1); }

  /// Throws ValidationError if indices are not 1..N, counts are out of range,
  /// or batch sizes differ while `relaxed_sizes` is false.
  static MethodTrace make(std::string method, Duration lambda, std::string corruption,
                          std::vector<BatchRecord> records, bool relaxed_sizes = false);

  friend bool operator==(const MethodTrace&, const MethodTrace&) = default;
};

/// Inference with adaptation disabled from batch cutoff_m + 1 onward.
struct FrozenRun {
  std::size_t cutoff_m = 0;
  std::vector<BatchRecord> records;  // indices m+1..N

  static FrozenRun make(std::size_t cutoff_m, std::size_t n, std::vector<BatchRecord> records);

  const BatchRecord& at(std::size_t index) const { return records.at(index - cutoff_m - 1); }

  friend bool operator==(const FrozenRun&, const FrozenRun&) = default;
};

struct TraceBundle {
  MethodTrace adapted;
  std::map<std::size_t, FrozenRun> frozen_runs;

  /// Adds a run after checking 0 <= m <= N and index coverage.
  void add_frozen(FrozenRun run);
};

enum class Weighting { per_batch, per_sample };

/// per_batch: unweighted mean of batch accuracies; per_sample: pooled
/// correct / pooled size. Throws std::invalid_argument on empty input.
double accuracy_mean(std::span<const BatchRecord> records, Weighting weighting = Weighting::per_batch);

/// mean + k_sigma * sample standard deviation, rounded to the nanosecond.
Duration estimate_lambda(std::span<const Duration> samples, double k_sigma);

struct LatencySummary {
  double mean_e_ms = 0.0;
  double mean_ell_ms = 0.0;
  double mean_delta_ms = 0.0;
};

LatencySummary summarize_latency(const MethodTrace& trace);

}  // namespace tempora
