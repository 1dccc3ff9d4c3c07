#pragma once

#include <CLI11.hpp>

#include <functional>

namespace tempora::cli {

/// Registers a subcommand on `root`; the returned callable runs it after a
/// successful parse and yields the process exit code.
struct Command {
  CLI::App* sub = nullptr;
  std::function<int()> run;
};

Command add_evaluate(CLI::App& root);
Command add_analyze(CLI::App& root);
Command add_gen(CLI::App& root);
Command add_oracle_check(CLI::App& root);

}  // namespace tempora::cli
