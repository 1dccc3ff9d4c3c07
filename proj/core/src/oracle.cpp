#include "tempora/oracle.hpp"

#include "tempora/error.hpp"

#include <numeric>
#include <optional>

namespace tempora::oracle {

Duration exact_tick(const MethodTrace& trace, const DiscreteConfig& cfg) {
  std::int64_t g = cfg.gamma.count();
  for (const auto& r : trace.records) g = std::gcd(g, r.delta().count());
  return Duration{std::max<std::int64_t>(g, 1)};
}

Schedule oracle_discrete(const MethodTrace& trace, const DiscreteConfig& cfg, OracleConfig ocfg) {
  const std::int64_t tick = ocfg.tick.count();
  if (tick < 1) throw ConfigError("oracle tick must be at least 1 ns");
  if (cfg.gamma.count() <= 0) throw ConfigError("inter-arrival time gamma must be positive");
  if (cfg.gamma.count() % tick != 0) throw ConfigError("oracle tick does not divide gamma");
  for (const auto& r : trace.records) {
    if (r.delta().count() % tick != 0) {
      throw ConfigError("oracle tick does not divide delta of batch " + std::to_string(r.index));
    }
  }

  const std::size_t n = trace.size();
  const bool buffered = cfg.variant == Variant::buffered;
  Schedule schedule;
  schedule.n = n;

  std::size_t next_arrival = 1;
  std::optional<std::size_t> buffer;  // buffered: latest arrival not yet picked up
  bool busy = false;
  std::int64_t busy_until = 0;

  for (std::int64_t t = 0;; t += tick) {
    // 1. Arrival (evicts whatever the buffer held).
    std::optional<std::size_t> arriving;
    if (next_arrival <= n && t == static_cast<std::int64_t>(next_arrival - 1) * cfg.gamma.count()) {
      arriving = next_arrival++;
      if (buffered) buffer = arriving;
    }
    // 2. Completion, 3. pickup. A zero-length job completes within the tick.
    for (;;) {
      if (busy && t == busy_until) busy = false;
      if (busy) break;
      std::optional<std::size_t> pick;
      if (buffered) {
        pick = buffer;
        buffer.reset();
      } else {
        pick = arriving;
        arriving.reset();
      }
      if (!pick) break;
      const std::int64_t delta = trace.at(*pick).delta().count();
      schedule.events.push_back(ScheduleEvent{*pick, Duration{t}, Duration{t + delta}});
      busy = true;
      busy_until = t + delta;
    }
    // Strict mode: an arrival not picked up this instant is lost.
    const bool stream_over = next_arrival > n && !buffer;
    if (stream_over && !busy) break;
  }
  return schedule;
}

std::size_t oracle_cutoff(std::span<const Duration> c, Duration budget) {
  std::size_t best = 0;
  for (std::size_t j = 0; j <= c.size(); ++j) {
    Duration sum{0};
    for (std::size_t i = 0; i < j; ++i) sum += c[i];
    if (sum <= budget) best = j;
  }
  return best;
}

}  // namespace tempora::oracle
