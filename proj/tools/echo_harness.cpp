// Scripted provider child: answers the line protocol by replaying a trace
// bundle. Fault switches make it misbehave on purpose for failure tests.

#include "cli_common.hpp"

#include "tempora/provider.hpp"
#include "tempora/trace_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <thread>

int main(int argc, char** argv) {
  using namespace tempora;
  CLI::App app{"Replays a trace over the provider line protocol", "tempora-echo-harness"};
  std::string trace_path;
  std::vector<std::string> frozen;
  std::size_t malformed_at = 0, exit_after = 0, hang_at = 0;
  app.add_option("--trace", trace_path, "Adapted trace")->required();
  app.add_option("--frozen", frozen, "Frozen-run files (glob, repeatable)");
  app.add_option("--malformed-at", malformed_at, "Send a malformed reply to the k-th STEP");
  app.add_option("--exit-after", exit_after, "Exit abruptly after answering k STEPs");
  app.add_option("--hang-at", hang_at, "Stop answering at the k-th STEP");
  CLI11_PARSE(app, argc, argv);

  TraceBundle bundle;
  try {
    bundle.adapted = load_trace(trace_path);
    if (!frozen.empty())
      for (const auto& p : cli::expand_globs(frozen)) bundle.add_frozen(load_frozen_run(p).run);
  } catch (const std::exception& e) {
    std::cerr << "echo-harness: " << e.what() << '\n';
    return 2;
  }

  ReplayProvider replay(bundle);
  std::string line;
  std::size_t steps = 0;
  while (std::getline(std::cin, line)) {
    try {
      const auto msg = wire::parse(line);
      if (msg.verb == "HELLO") {
        replay.open(wire::parse_hello(msg));
        std::cout << wire::ready() << std::endl;
      } else if (msg.verb == "STEP") {
        ++steps;
        if (hang_at != 0 && steps == hang_at) std::this_thread::sleep_for(std::chrono::hours(1));
        if (malformed_at != 0 && steps == malformed_at) {
          std::cout << "RES e_ms=oops" << std::endl;
          continue;
        }
        std::cout << wire::res(replay.step(wire::parse_step(msg))) << std::endl;
        if (exit_after != 0 && steps == exit_after) return 9;
      } else if (msg.verb == "BYE") {
        replay.close();
        std::cout << wire::done() << std::endl;
        return 0;
      } else {
        std::cerr << "echo-harness: unexpected message: " << line << '\n';
        return 3;
      }
    } catch (const std::exception& e) {
      std::cerr << "echo-harness: " << e.what() << '\n';
      return 3;
    }
  }
  return 4;  // engine closed the stream without BYE
}
