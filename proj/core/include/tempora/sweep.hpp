#pragma once

#include "tempora/amortised.hpp"
#include "tempora/analysis.hpp"
#include "tempora/continuous.hpp"
#include "tempora/discrete.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tempora {

/// Scenario grids and evaluation options for one sweep. Empty grids skip
/// their protocol; `defaults()` fills all three.
struct SweepSpec {
  std::vector<double> rho;
  std::vector<Duration> gamma;  // mutually exclusive with rho
  std::vector<Duration> thresholds;
  std::vector<Duration> budgets;

  Variant variant = Variant::buffered;
  Weighting weighting = Weighting::per_batch;
  std::optional<double> frozen_accuracy;
  std::optional<Duration> lambda_override;

  /// Child command for live sessions; `{trace}`, `{method}` and
  /// `{corruption}` are substituted per cell. Empty means replay.
  std::vector<std::string> provider_cmd;
  std::chrono::milliseconds provider_timeout{30'000};

  std::size_t workers = 1;
  bool keep_details = false;  // retain schedules and per-batch responsiveness

  static SweepSpec defaults();

  /// Throws ConfigError for rho outside (0, 1], non-positive gamma or T,
  /// negative B, or rho and gamma together.
  void validate() const;

  std::vector<Scenario> scenarios() const;
};

struct SweepInput {
  TraceBundle bundle;
  std::filesystem::path source;  // empty for in-memory traces
};

struct CellResult {
  std::size_t input = 0;
  std::size_t scenario = 0;
  std::optional<double> utility;
  std::string error;          // set when the cell failed
  std::string provider_kind;  // replay | external

  std::optional<DiscreteReport> discrete;
  std::optional<ContinuousReport> continuous;
  std::optional<AmortisedReport> amortised;
  std::optional<Schedule> schedule;  // kept with SweepSpec::keep_details
  Duration lambda{0};
};

struct SweepResult {
  UtilityMatrix matrix;
  std::vector<Scenario> scenarios;
  std::vector<CellResult> cells;  // input-major, scenario-minor
  LatencyTable latency;
  std::vector<std::string> warnings;
  std::size_t failed = 0;

  const CellResult& cell(std::size_t input, std::size_t scenario) const {
    return cells.at(input * scenarios.size() + scenario);
  }
};

/// Evaluates every (input, scenario) cell on a pool of spec.workers threads.
/// Failures become absent matrix cells with the reason; the result does not
/// depend on the worker count. Throws ConfigError for an invalid spec or
/// duplicated (method, corruption) inputs.
SweepResult run_sweep(const std::vector<SweepInput>& inputs, const SweepSpec& spec);

/// Worker count from TEMPORA_WORKERS, else the hardware concurrency (>= 1).
std::size_t workers_from_environment();

}  // namespace tempora
