#pragma once

#include "tempora/trace.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace tempora {

enum class Variant {
  buffered,  // single-slot buffer holds the latest arrival until the next one
  strict,    // no buffer: a free pipeline idles until the next arrival
};

const char* to_string(Variant v);
Variant parse_variant(const std::string& text);

struct DiscreteConfig {
  Duration gamma{0};
  Variant variant = Variant::buffered;
  Duration lambda{0};

  /// Throws ConfigError unless gamma > 0.
  static DiscreteConfig make(Duration gamma, Variant variant, Duration lambda);

  double utilisation() const { return static_cast<double>(lambda.count()) / static_cast<double>(gamma.count()); }
  Duration arrival(std::size_t index) const { return gamma * static_cast<std::int64_t>(index - 1); }
};

/// gamma = round(lambda / rho). Throws ConfigError for rho <= 0.
Duration utilisation_to_gamma(Duration lambda, double rho);

struct ScheduleEvent {
  std::size_t batch = 0;
  Duration start{0};
  Duration finish{0};

  friend bool operator==(const ScheduleEvent&, const ScheduleEvent&) = default;
};

struct Schedule {
  std::vector<ScheduleEvent> events;
  std::size_t n = 0;

  std::vector<std::size_t> served() const;
  std::size_t served_count() const { return events.size(); }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// The served-batch recurrence, advanced one event at a time. File replay
/// feeds it precomputed deltas; live sessions feed it each served batch's
/// measured delta before asking for the next index.
class DiscreteScheduler {
 public:
  DiscreteScheduler(std::size_t n, DiscreteConfig cfg);

  /// Batch to serve next, or nullopt once the stream is exhausted.
  std::optional<std::size_t> next_batch() const { return next_; }
  /// Start time of the next event.
  Duration next_start() const;

  /// Records that next_batch() ran for `delta`; returns the event.
  const ScheduleEvent& serve(Duration delta);

  const Schedule& schedule() const { return schedule_; }

 private:
  std::size_t n_;
  DiscreteConfig cfg_;
  std::optional<std::size_t> next_;
  Schedule schedule_;
};

Schedule simulate(const MethodTrace& trace, const DiscreteConfig& cfg);

struct DiscreteReport {
  std::size_t n = 0;
  std::size_t served_count = 0;
  double availability = 0.0;
  std::optional<double> served_accuracy;  // absent when nothing was served
  double utility = 0.0;
};

/// Skipped batches score zero (null predictions).
DiscreteReport discrete_utility(const Schedule& schedule, const MethodTrace& trace,
                                Weighting weighting = Weighting::per_batch);

/// CSV `event,p,s_ms,f_ms` for auditing a schedule.
void write_schedule_csv(const Schedule& schedule, std::ostream& out);

}  // namespace tempora
