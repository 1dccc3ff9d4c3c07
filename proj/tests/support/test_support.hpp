#pragma once

// Trace builders shared by unit and acceptance tests.

#include "tempora/trace.hpp"

#include <cstdint>
#include <unistd.h>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace tempora::testing {

inline constexpr Duration ms(std::int64_t v) { return from_millis(v); }

/// Records with the given deltas (all in e, ell = 0) and a fixed correct count.
inline MethodTrace delta_trace(const std::vector<Duration>& deltas, Duration lambda = from_millis(40),
                               std::uint32_t batch_size = 64, std::uint32_t correct = 32,
                               const std::string& method = "M", const std::string& corruption = "c") {
  std::vector<BatchRecord> records;
  for (std::size_t i = 0; i < deltas.size(); ++i) records.push_back({i + 1, deltas[i], Duration{0}, batch_size, correct});
  return MethodTrace::make(method, lambda, corruption, std::move(records));
}

inline MethodTrace constant_trace(std::size_t n, Duration delta, Duration lambda = from_millis(40)) {
  return delta_trace(std::vector<Duration>(n, delta), lambda);
}

/// Random trace: e and ell uniform in [lo, hi] split, correct uniform.
inline MethodTrace random_trace(std::mt19937_64& rng, std::size_t n, Duration lo, Duration hi, Duration lambda,
                                std::uint32_t batch_size = 64) {
  std::uniform_int_distribution<std::int64_t> span(lo.count(), hi.count());
  std::uniform_real_distribution<double> split(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> correct(0, batch_size);
  std::vector<BatchRecord> records;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::int64_t d = span(rng);
    const auto e = static_cast<std::int64_t>(static_cast<double>(d) * split(rng));
    records.push_back({i, Duration{e}, Duration{d - e}, batch_size, correct(rng)});
  }
  return MethodTrace::make("R", lambda, "rand", std::move(records));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tempora-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tempora::testing
