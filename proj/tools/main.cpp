#include "cli_common.hpp"
#include "commands.hpp"

#include "tempora/error.hpp"
#include "tempora/manifest.hpp"

#include <algorithm>
#include <iostream>

int main(int argc, char** argv) {
  using namespace tempora::cli;
  CLI::App app{"Temporal evaluation engine for streaming test-time adaptation", "tempora"};
  app.set_version_flag("--version", tempora::engine_version());
  app.require_subcommand(1);

  const Command commands[] = {add_evaluate(app), add_analyze(app), add_gen(app), add_oracle_check(app)};

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  } catch (const UsageError& e) {
    std::cerr << "tempora: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    for (const auto& c : commands)
      if (c.sub->parsed()) return c.run();
  } catch (const UsageError& e) {
    std::cerr << "tempora: " << e.what() << '\n';
    return exit_usage;
  } catch (const tempora::ConfigError& e) {
    std::cerr << "tempora: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "tempora: " << e.what() << '\n';
    return exit_partial;
  }
  return exit_usage;
}
