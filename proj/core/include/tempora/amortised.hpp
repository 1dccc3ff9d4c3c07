#pragma once

#include "tempora/trace.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tempora {

enum class OverheadMode { clamped, raw };

/// c_i = delta_i - lambda, clamped at zero unless `raw` is requested.
std::vector<Duration> overheads(const MethodTrace& trace, Duration lambda, OverheadMode mode = OverheadMode::clamped);
inline std::vector<Duration> overheads(const MethodTrace& trace) { return overheads(trace, trace.lambda); }

/// Largest m with c_1 + ... + c_m <= budget. Entries must be non-negative.
std::size_t cutoff(std::span<const Duration> c, Duration budget);

struct AmortisedConfig {
  Duration budget{0};
  Duration lambda{0};
  std::optional<double> frozen_accuracy;  // fallback when no frozen run covers the cutoff
  Weighting weighting = Weighting::per_batch;

  static AmortisedConfig make(Duration budget, Duration lambda, std::optional<double> frozen_accuracy = std::nullopt);
};

enum class FrozenSource { none, frozen_run, nearest_run, constant };
const char* to_string(FrozenSource s);

struct AmortisedReport {
  std::size_t n = 0;
  std::size_t cutoff_m = 0;
  double adapted_fraction = 0.0;          // beta = m / N
  std::optional<double> adapt_accuracy;   // absent when m == 0
  std::optional<double> frozen_accuracy;  // absent when m == N
  double utility = 0.0;
  Duration budget_spent{0};
  FrozenSource frozen_source = FrozenSource::none;
  std::optional<std::size_t> frozen_run_cutoff;
  std::vector<std::string> warnings;
};

/// U = beta * a_adapt + (1 - beta) * a_frozen. Frozen accuracy comes from the
/// run with cutoff exactly m, else the nearest run with cutoff < m (warning),
/// else cfg.frozen_accuracy; otherwise throws ResolutionError.
AmortisedReport amortised_utility(const TraceBundle& bundle, const AmortisedConfig& cfg);

/// Resolution ladder on its own, shared with the replay provider.
struct FrozenResolution {
  const FrozenRun* run = nullptr;
  FrozenSource source = FrozenSource::none;
};
FrozenResolution resolve_frozen_run(const TraceBundle& bundle, std::size_t m);

struct ParetoPoint {
  Duration budget{0};
  double utility = 0.0;
  std::string method;

  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

/// Points not dominated by another with budget <= and utility >= (one
/// strict), sorted by budget then method. Equal points are all kept.
std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points);

/// CSV `budget_s,utility,method,on_frontier` over all points.
void write_frontier_csv(std::span<const ParetoPoint> points, std::ostream& out);

}  // namespace tempora
