#pragma once

#include "tempora/trace.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace tempora::cli {

enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_usage = 2 };

/// Raised for usage and configuration problems; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Appends `--key value` for every `key=value` line of the file named by
/// `--config`, unless the command line already sets that key. `true` and
/// `false` values toggle bare flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Expands each pattern with glob(3); results are sorted and deduplicated.
/// A pattern matching nothing is a UsageError.
std::vector<std::filesystem::path> expand_globs(const std::vector<std::string>& patterns);

/// Splits a command line into argv words (quotes honoured, no substitution).
std::vector<std::string> split_command(const std::string& command);

/// Decimal list items parsed exactly ("38.7" ms, "0.5" s).
std::vector<Duration> parse_millis_list(const std::vector<std::string>& items);
std::vector<Duration> parse_seconds_list(const std::vector<std::string>& items);

Weighting parse_weighting(const std::string& text);

/// Canonical key=value rendering of parsed options, for the manifest hash.
std::string canonical_config(const std::vector<std::pair<std::string, std::string>>& entries);

std::string join(const std::vector<std::string>& items, const std::string& sep);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tempora::cli
