#pragma once

// Brute-force reference implementations. They share no code path with the
// closed-form engines and exist to check them.

#include "tempora/discrete.hpp"

#include <span>

namespace tempora::oracle {

struct OracleConfig {
  Duration tick{100'000};  // 100 us; must divide gamma and every delta (1 ns always does)
};

/// Walks time tick by tick with explicit arrival, eviction, completion and
/// pickup events. Throws ConfigError if the tick does not divide the inputs.
Schedule oracle_discrete(const MethodTrace& trace, const DiscreteConfig& cfg, OracleConfig ocfg = {});

/// max { j : c_1 + ... + c_j <= B } by evaluating every prefix from scratch.
std::size_t oracle_cutoff(std::span<const Duration> c, Duration budget);

/// Largest tick (a divisor of gamma and every delta) for exact walking.
Duration exact_tick(const MethodTrace& trace, const DiscreteConfig& cfg);

}  // namespace tempora::oracle
