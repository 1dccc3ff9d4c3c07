#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tempora {

enum class ValidationKind {
  missing_field,
  malformed_value,
  negative_value,
  non_contiguous_index,
  correct_exceeds_batch,
  non_positive_batch,
  mixed_batch_size,
  header,
  coverage,
};

const char* to_string(ValidationKind kind);

/// Raised by trace ingestion and construction. `row` is the 1-based record
/// row (0 for header-level problems).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationKind kind, std::size_t row, std::string field, const std::string& message)
      : std::runtime_error(message), kind_(kind), row_(row), field_(std::move(field)) {}

  ValidationKind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ValidationKind kind_;
  std::size_t row_;
  std::string field_;
};

/// Invalid configuration (parameter outside its protocol's domain).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs are valid but the requested quantity cannot be resolved (e.g. the
/// frozen phase of an amortised evaluation has no accuracy source).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tempora
