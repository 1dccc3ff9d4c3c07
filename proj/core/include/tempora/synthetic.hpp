#pragma once

#include "tempora/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tempora {

/// Expected per-batch accuracy as a function of the batch index.
struct AccuracyCurve {
  enum class Shape { constant, linear_ramp, step };
  Shape shape = Shape::constant;
  double start = 0.0;        // constant value, ramp start, or level before the step
  double end = 0.0;          // ramp end or level after the step
  std::size_t step_at = 0;   // batches 1..step_at use `start`

  double at(std::size_t index, std::size_t n) const;
};

/// How accuracy behaves once adaptation stops (used to synthesise frozen runs).
enum class FrozenBehaviour { retain, collapse };

struct SyntheticProfile {
  std::string method;
  std::string corruption = "mean";
  Duration lambda{39'900'000};
  Duration mean_e{0};
  Duration mean_ell{0};
  Duration sd_e{0};
  Duration sd_ell{0};
  std::uint32_t batch_size = 64;
  AccuracyCurve accuracy;
  FrozenBehaviour frozen = FrozenBehaviour::retain;
  double collapsed_accuracy = 0.001;
  bool gradient_based = false;
};

/// Names of the built-in presets calibrated to measured per-batch latencies
/// (standard-table2, adabn-table2, ..., sar-table2).
std::vector<std::string> preset_names();

/// Built-in preset; `corruption` selects the offline accuracy for one of the
/// 15 corruption labels (or "mean"). Throws ConfigError for unknown names,
/// listing the available presets.
SyntheticProfile preset(const std::string& name, const std::string& corruption = "mean");

/// The 15 corruption labels used by presets, in table order.
const std::vector<std::string>& corruption_labels();

/// Deterministic for a fixed seed: latencies are Gaussian around the profile
/// means, truncated at zero by resampling; correct counts are binomial draws
/// around the accuracy curve.
MethodTrace gen_synthetic(const SyntheticProfile& profile, std::size_t n, std::uint64_t seed);

/// Frozen-phase run for batches cutoff_m+1..N of `adapted`. Latencies are
/// inference-only (ell = 0).
FrozenRun gen_frozen_run(const SyntheticProfile& profile, const MethodTrace& adapted, std::size_t cutoff_m,
                         std::uint64_t seed);

}  // namespace tempora
