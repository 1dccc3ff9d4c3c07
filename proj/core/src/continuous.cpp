#include "tempora/continuous.hpp"

#include "tempora/error.hpp"

#include <cstdio>
#include <ostream>

namespace tempora {

ContinuousConfig ContinuousConfig::make(Duration threshold, Duration lambda) {
  if (lambda.count() <= 0) throw ConfigError("lambda must be positive");
  if (threshold <= lambda) {
    throw ConfigError("threshold T=" + format_millis(threshold) + "ms must exceed lambda=" + format_millis(lambda) +
                      "ms");
  }
  return ContinuousConfig{threshold, lambda};
}

std::vector<WaitTime> wait_times(const MethodTrace& trace, Duration lambda) {
  std::vector<WaitTime> out;
  out.reserve(trace.size());
  Duration previous_ell{0};
  for (const auto& r : trace.records) {
    WaitTime w;
    w.wait = previous_ell + r.e;
    w.delay = std::max(Duration{0}, w.wait - lambda);
    out.push_back(w);
    previous_ell = r.ell;
  }
  return out;
}

double decay(Duration delay, const ContinuousConfig& cfg) {
  if (delay.count() < 0) throw std::invalid_argument("delay must be non-negative");
  const double ratio = static_cast<double>(delay.count()) / static_cast<double>(cfg.tolerance().count());
  return 1.0 / (1.0 + ratio);
}

ContinuousReport continuous_utility(const MethodTrace& trace, const ContinuousConfig& cfg, bool keep_per_batch) {
  ContinuousReport report;
  const std::size_t n = trace.size();
  if (n == 0) return report;

  const auto waits = wait_times(trace, cfg.lambda);
  std::vector<double> a(n);
  std::vector<double> k(n);
  double sum_a = 0.0;
  double sum_k = 0.0;
  double sum_ak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = trace.records[i].accuracy();
    k[i] = decay(waits[i].delay, cfg);
    sum_a += a[i];
    sum_k += k[i];
    sum_ak += a[i] * k[i];
  }
  const double nd = static_cast<double>(n);
  report.mean_accuracy = sum_a / nd;
  report.mean_responsiveness = sum_k / nd;
  report.utility = sum_ak / nd;

  // Centred second pass keeps the covariance accurate when it is tiny.
  double cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) cov += (a[i] - report.mean_accuracy) * (k[i] - report.mean_responsiveness);
  report.covariance = cov / nd;

  if (report.mean_accuracy > 0.0) {
    report.alignment = report.utility / (report.mean_accuracy * report.mean_responsiveness);
  }
  if (keep_per_batch) {
    report.per_batch.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      report.per_batch.push_back(BatchResponsiveness{trace.records[i].index, waits[i], k[i], a[i]});
    }
  }
  return report;
}

void write_responsiveness_csv(const ContinuousReport& report, std::ostream& out) {
  out << "index,w_ms,d_ms,kappa,a\n";
  char buf[64];
  for (const auto& b : report.per_batch) {
    out << b.index << ',' << format_millis(b.wait.wait) << ',' << format_millis(b.wait.delay) << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", b.kappa, b.accuracy);
    out << buf << '\n';
  }
}

}  // namespace tempora
