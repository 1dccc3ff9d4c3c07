#include "tempora/time.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tempora {

namespace {

[[noreturn]] void malformed(std::string_view text) {
  throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
}

}  // namespace

std::int64_t parse_scaled_decimal(std::string_view text, int scale_digits) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }

  std::string digits;
  int fraction_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      any_digit = true;
      if (!(digits.empty() && c == '0')) digits.push_back(c);
      if (seen_dot) ++fraction_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) malformed(text);

  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) malformed(text);
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c < '0' || c > '9') malformed(text);
      exponent = exponent * 10 + (c - '0');
      if (exponent > 4000) throw std::out_of_range("decimal exponent out of range: " + std::string(text));
    }
    if (exp_negative) exponent = -exponent;
  }
  if (pos != text.size()) malformed(text);

  // Value = digits * 10^shift, rounded to an integer.
  const long shift = static_cast<long>(scale_digits) + exponent - fraction_digits;
  const long len = static_cast<long>(digits.size());
  const long kept = len + std::min(shift, 0L);

  __extension__ using u128 = unsigned __int128;
  u128 magnitude = 0;
  const u128 limit = static_cast<u128>(std::numeric_limits<std::int64_t>::max());
  auto push_digit = [&](int d) {
    magnitude = magnitude * 10 + static_cast<unsigned>(d);
    if (magnitude > limit + 1) throw std::out_of_range("decimal out of range: " + std::string(text));
  };
  for (long i = 0; i < kept; ++i) push_digit(digits[static_cast<std::size_t>(i)] - '0');
  if (kept >= 0 && kept < len && digits[static_cast<std::size_t>(kept)] >= '5') {
    magnitude += 1;
  }
  for (long i = 0; i < shift && len > 0; ++i) push_digit(0);

  if (negative) {
    if (magnitude > limit + 1) throw std::out_of_range("decimal out of range: " + std::string(text));
    return magnitude == limit + 1 ? std::numeric_limits<std::int64_t>::min()
                                  : -static_cast<std::int64_t>(magnitude);
  }
  if (magnitude > limit) throw std::out_of_range("decimal out of range: " + std::string(text));
  return static_cast<std::int64_t>(magnitude);
}

Duration parse_millis(std::string_view text) { return Duration{parse_scaled_decimal(text, 6)}; }

Duration parse_seconds(std::string_view text) { return Duration{parse_scaled_decimal(text, 9)}; }

std::string format_scaled_decimal(std::int64_t value, int scale_digits) {
  const bool negative = value < 0;
  // Work in unsigned space so INT64_MIN formats correctly.
  std::uint64_t magnitude = negative ? 0 - static_cast<std::uint64_t>(value) : static_cast<std::uint64_t>(value);
  std::string digits = std::to_string(magnitude);
  if (static_cast<int>(digits.size()) <= scale_digits) {
    digits.insert(0, static_cast<std::size_t>(scale_digits + 1) - digits.size(), '0');
  }
  std::string integer_part = digits.substr(0, digits.size() - static_cast<std::size_t>(scale_digits));
  std::string fraction = digits.substr(digits.size() - static_cast<std::size_t>(scale_digits));
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();

  std::string out = negative ? "-" : "";
  out += integer_part;
  if (!fraction.empty()) {
    out += '.';
    out += fraction;
  }
  return out;
}

std::string format_millis(Duration d) { return format_scaled_decimal(d.count(), 6); }

std::string format_seconds(Duration d) { return format_scaled_decimal(d.count(), 9); }

Duration round_millis(double ms) {
  if (!std::isfinite(ms)) throw std::invalid_argument("non-finite millisecond value");
  return Duration{std::llround(ms * static_cast<double>(kNanosPerMilli))};
}

}  // namespace tempora
