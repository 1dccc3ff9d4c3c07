#include "tempora/discrete.hpp"

#include "tempora/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace tempora {

const char* to_string(Variant v) { return v == Variant::buffered ? "buffered" : "strict"; }

Variant parse_variant(const std::string& text) {
  if (text == "buffered") return Variant::buffered;
  if (text == "strict") return Variant::strict;
  throw ConfigError("unknown variant '" + text + "' (expected buffered|strict)");
}

DiscreteConfig DiscreteConfig::make(Duration gamma, Variant variant, Duration lambda) {
  if (gamma.count() <= 0) throw ConfigError("inter-arrival time gamma must be positive");
  return DiscreteConfig{gamma, variant, lambda};
}

Duration utilisation_to_gamma(Duration lambda, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("utilisation rho must be positive");
  return Duration{std::llround(static_cast<double>(lambda.count()) / rho)};
}

std::vector<std::size_t> Schedule::served() const {
  std::vector<std::size_t> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.batch);
  return out;
}

DiscreteScheduler::DiscreteScheduler(std::size_t n, DiscreteConfig cfg) : n_(n), cfg_(cfg) {
  if (cfg_.gamma.count() <= 0) throw ConfigError("inter-arrival time gamma must be positive");
  schedule_.n = n;
  if (n > 0) next_ = 1;
}

Duration DiscreteScheduler::next_start() const {
  const Duration arrival = cfg_.arrival(next_.value());
  if (schedule_.events.empty()) return arrival;
  return std::max(schedule_.events.back().finish, arrival);
}

const ScheduleEvent& DiscreteScheduler::serve(Duration delta) {
  const std::size_t p = next_.value();
  const Duration start = next_start();
  schedule_.events.push_back(ScheduleEvent{p, start, start + delta});

  const std::int64_t f = schedule_.events.back().finish.count();
  const std::int64_t g = cfg_.gamma.count();
  std::size_t candidate = 0;
  if (cfg_.variant == Variant::buffered) {
    // Latest arrival at or before f still sits in the buffer; an arrival at
    // exactly f has already evicted its predecessor.
    candidate = std::max(p + 1, static_cast<std::size_t>(f / g) + 1);
    // The final batch is never evicted (drain phase).
    if (candidate > n_ && p < n_) candidate = n_;
  } else {
    // Nothing is held: wait for the first arrival at or after f.
    candidate = std::max(p + 1, static_cast<std::size_t>((f + g - 1) / g) + 1);
  }
  if (candidate > n_) {
    next_.reset();
  } else {
    next_ = candidate;
  }
  return schedule_.events.back();
}

Schedule simulate(const MethodTrace& trace, const DiscreteConfig& cfg) {
  DiscreteScheduler scheduler(trace.size(), cfg);
  while (auto p = scheduler.next_batch()) scheduler.serve(trace.at(*p).delta());
  return scheduler.schedule();
}

DiscreteReport discrete_utility(const Schedule& schedule, const MethodTrace& trace, Weighting weighting) {
  if (schedule.n != trace.size()) {
    throw std::invalid_argument("schedule length " + std::to_string(schedule.n) + " does not match trace length " +
                                std::to_string(trace.size()));
  }
  DiscreteReport report;
  report.n = trace.size();
  report.served_count = schedule.served_count();
  if (report.n == 0) return report;
  report.availability = static_cast<double>(report.served_count) / static_cast<double>(report.n);
  if (report.served_count == 0) return report;

  std::vector<BatchRecord> served;
  served.reserve(report.served_count);
  for (const auto& e : schedule.events) served.push_back(trace.at(e.batch));
  report.served_accuracy = accuracy_mean(served, weighting);
  report.utility = report.availability * *report.served_accuracy;
  return report;
}

void write_schedule_csv(const Schedule& schedule, std::ostream& out) {
  out << "event,p,s_ms,f_ms\n";
  std::size_t j = 0;
  for (const auto& e : schedule.events) {
    out << ++j << ',' << e.batch << ',' << format_millis(e.start) << ',' << format_millis(e.finish) << '\n';
  }
}

}  // namespace tempora
