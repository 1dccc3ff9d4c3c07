#pragma once

#include "tempora/trace.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace tempora {

struct ContinuousConfig {
  Duration threshold{0};  // HCI threshold T: value halves when the wait reaches T
  Duration lambda{0};

  /// Throws ConfigError unless T > lambda > 0.
  static ContinuousConfig make(Duration threshold, Duration lambda);

  Duration tolerance() const { return threshold - lambda; }
};

struct WaitTime {
  Duration wait{0};   // l_{i-1} + e_i
  Duration delay{0};  // max(0, wait - lambda)
};

/// Greedy-user wait times; the extrinsic span of batch i-1 stalls pickup of
/// batch i, and l_0 = 0.
std::vector<WaitTime> wait_times(const MethodTrace& trace, Duration lambda);
inline std::vector<WaitTime> wait_times(const MethodTrace& trace) { return wait_times(trace, trace.lambda); }

/// Hyperbolic responsiveness 1 / (1 + d / (T - lambda)).
double decay(Duration delay, const ContinuousConfig& cfg);

struct BatchResponsiveness {
  std::size_t index = 0;
  WaitTime wait;
  double kappa = 1.0;
  double accuracy = 0.0;
};

struct ContinuousReport {
  double mean_accuracy = 0.0;
  double mean_responsiveness = 0.0;
  double covariance = 0.0;               // population Cov(a, kappa)
  std::optional<double> alignment;       // U / (a_bar * kappa_bar); absent when a_bar == 0
  double utility = 0.0;
  std::vector<BatchResponsiveness> per_batch;  // filled when requested
};

/// U = mean(a_i * kappa_i). Uses cfg.lambda for the delays.
ContinuousReport continuous_utility(const MethodTrace& trace, const ContinuousConfig& cfg, bool keep_per_batch = false);

/// CSV `index,w_ms,d_ms,kappa,a`.
void write_responsiveness_csv(const ContinuousReport& report, std::ostream& out);

}  // namespace tempora
