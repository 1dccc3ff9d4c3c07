#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace tempora {

/// Every time quantity in the engine is an integer nanosecond count.
using Duration = std::chrono::nanoseconds;

inline constexpr std::int64_t kNanosPerMilli = 1'000'000;
inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;

constexpr Duration from_millis(std::int64_t ms) { return Duration{ms * kNanosPerMilli}; }
constexpr Duration from_seconds(std::int64_t s) { return Duration{s * kNanosPerSecond}; }

/// Parses decimal text (optional sign, fraction and exponent) scaled by
/// 10^scale_digits into an integer, without a binary floating-point
/// intermediate. Digits beyond the scale are rounded half away from zero.
/// Throws std::invalid_argument on malformed text and std::out_of_range on
/// overflow.
std::int64_t parse_scaled_decimal(std::string_view text, int scale_digits);

/// "38.7" -> 38'700'000 ns.
Duration parse_millis(std::string_view text);
/// "1.5" -> 1'500'000'000 ns.
Duration parse_seconds(std::string_view text);

/// Shortest exact decimal rendering of value / 10^scale_digits, e.g.
/// (38700000, 6) -> "38.7". Round-trips through parse_scaled_decimal.
std::string format_scaled_decimal(std::int64_t value, int scale_digits);

std::string format_millis(Duration d);
std::string format_seconds(Duration d);

inline double to_millis(Duration d) { return static_cast<double>(d.count()) / kNanosPerMilli; }
inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / kNanosPerSecond; }

/// Nearest-nanosecond conversion for values that are already real-valued
/// (configuration grids, estimator output).
Duration round_millis(double ms);

}  // namespace tempora
