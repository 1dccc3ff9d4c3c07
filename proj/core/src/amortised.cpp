#include "tempora/amortised.hpp"

#include "tempora/error.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace tempora {

const char* to_string(FrozenSource s) {
  switch (s) {
    case FrozenSource::none: return "none";
    case FrozenSource::frozen_run: return "frozen_run";
    case FrozenSource::nearest_run: return "nearest_run";
    case FrozenSource::constant: return "constant";
  }
  return "none";
}

std::vector<Duration> overheads(const MethodTrace& trace, Duration lambda, OverheadMode mode) {
  std::vector<Duration> c;
  c.reserve(trace.size());
  for (const auto& r : trace.records) {
    const Duration raw = r.delta() - lambda;
    c.push_back(mode == OverheadMode::clamped ? std::max(raw, Duration{0}) : raw);
  }
  return c;
}

std::size_t cutoff(std::span<const Duration> c, Duration budget) {
  Duration spent{0};
  std::size_t m = 0;
  for (const auto ci : c) {
    if (ci.count() < 0) throw std::invalid_argument("cutoff expects clamped (non-negative) overheads");
    if (spent + ci > budget) break;
    spent += ci;
    ++m;
  }
  return m;
}

AmortisedConfig AmortisedConfig::make(Duration budget, Duration lambda, std::optional<double> frozen_accuracy) {
  if (budget.count() < 0) throw ConfigError("budget must be non-negative");
  if (frozen_accuracy && (*frozen_accuracy < 0.0 || *frozen_accuracy > 1.0)) {
    throw ConfigError("frozen accuracy must lie in [0, 1]");
  }
  AmortisedConfig cfg;
  cfg.budget = budget;
  cfg.lambda = lambda;
  cfg.frozen_accuracy = frozen_accuracy;
  return cfg;
}

FrozenResolution resolve_frozen_run(const TraceBundle& bundle, std::size_t m) {
  const auto& runs = bundle.frozen_runs;
  if (auto it = runs.find(m); it != runs.end()) return {&it->second, FrozenSource::frozen_run};
  auto it = runs.lower_bound(m);
  if (it != runs.begin()) {
    --it;
    return {&it->second, FrozenSource::nearest_run};
  }
  return {};
}

AmortisedReport amortised_utility(const TraceBundle& bundle, const AmortisedConfig& cfg) {
  const MethodTrace& trace = bundle.adapted;
  AmortisedReport report;
  report.n = trace.size();
  if (report.n == 0) return report;

  const auto c = overheads(trace, cfg.lambda);
  const std::size_t m = cutoff(c, cfg.budget);
  report.cutoff_m = m;
  for (std::size_t i = 0; i < m; ++i) report.budget_spent += c[i];
  report.adapted_fraction = static_cast<double>(m) / static_cast<double>(report.n);

  std::span<const BatchRecord> records(trace.records);
  if (m > 0) report.adapt_accuracy = accuracy_mean(records.first(m), cfg.weighting);

  if (m == report.n) {
    report.utility = *report.adapt_accuracy;
    return report;
  }

  const auto resolution = resolve_frozen_run(bundle, m);
  if (resolution.run != nullptr) {
    const FrozenRun& run = *resolution.run;
    // A run frozen earlier covers a superset; take its m+1..N tail.
    std::span<const BatchRecord> tail(run.records);
    tail = tail.subspan(m - run.cutoff_m);
    report.frozen_accuracy = accuracy_mean(tail, cfg.weighting);
    report.frozen_source = resolution.source;
    report.frozen_run_cutoff = run.cutoff_m;
    if (resolution.source == FrozenSource::nearest_run) {
      report.warnings.push_back("no frozen run at cutoff " + std::to_string(m) + "; using run frozen at " +
                                std::to_string(run.cutoff_m));
    }
  } else if (cfg.frozen_accuracy) {
    report.frozen_accuracy = *cfg.frozen_accuracy;
    report.frozen_source = FrozenSource::constant;
  } else {
    throw ResolutionError("frozen phase unresolvable: no frozen run at or below cutoff " + std::to_string(m) +
                          " and no constant frozen accuracy configured");
  }

  const double beta = report.adapted_fraction;
  report.utility = (1.0 - beta) * *report.frozen_accuracy;
  if (report.adapt_accuracy) report.utility += beta * *report.adapt_accuracy;
  return report;
}

std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points) {
  std::vector<ParetoPoint> frontier;
  for (const auto& p : points) {
    const bool dominated = std::any_of(points.begin(), points.end(), [&](const ParetoPoint& q) {
      return q.budget <= p.budget && q.utility >= p.utility && (q.budget < p.budget || q.utility > p.utility);
    });
    if (!dominated) frontier.push_back(p);
  }
  std::stable_sort(frontier.begin(), frontier.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.budget != b.budget) return a.budget < b.budget;
    return a.method < b.method;
  });
  return frontier;
}

void write_frontier_csv(std::span<const ParetoPoint> points, std::ostream& out) {
  const auto frontier = pareto_frontier(points);
  out << "budget_s,utility,method,on_frontier\n";
  char buf[64];
  for (const auto& p : points) {
    const bool on = std::find(frontier.begin(), frontier.end(), p) != frontier.end();
    std::snprintf(buf, sizeof buf, "%.17g", p.utility);
    out << format_seconds(p.budget) << ',' << buf << ',' << p.method << ',' << (on ? 1 : 0) << '\n';
  }
}

}  // namespace tempora
