#include "cli_common.hpp"
#include "commands.hpp"

#include "tempora/amortised.hpp"
#include "tempora/discrete.hpp"
#include "tempora/oracle.hpp"
#include "tempora/trace_io.hpp"

#include <iostream>
#include <memory>

namespace tempora::cli {

namespace {

struct OracleOptions {
  std::vector<std::string> traces;
  std::vector<std::string> rho{"1", "0.7", "0.5", "0.35", "0.25"};
  std::vector<std::string> gamma_ms;
  std::vector<std::string> variants{"buffered", "strict"};
  std::vector<std::string> budget_s{"1", "2", "4", "8", "16", "32"};
  long tick_us = 100;
  std::string config;
};

Duration snap(Duration d, Duration tick) { return tick * ((d.count() + tick.count() / 2) / tick.count()); }

/// Rounds every latency to the tick so the walk stays short; both engines
/// then see the same quantised input.
MethodTrace quantise(const MethodTrace& t, Duration tick) {
  auto records = t.records;
  for (auto& r : records) {
    r.e = snap(r.e, tick);
    r.ell = snap(r.ell, tick);
  }
  return MethodTrace::make(t.method, t.lambda, t.corruption, std::move(records), t.relaxed_sizes);
}

int run_oracle_check(const OracleOptions& o) {
  if (o.tick_us <= 0) throw UsageError("--tick-us must be positive");
  const Duration tick{o.tick_us * 1000};
  constexpr double kMaxSteps = 5e7;
  std::size_t checks = 0, mismatches = 0;

  for (const auto& path : expand_globs(o.traces)) {
    const MethodTrace trace = load_trace(path);
    std::vector<Duration> gammas = parse_millis_list(o.gamma_ms);
    if (o.gamma_ms.empty())
      for (const auto& r : o.rho) gammas.push_back(utilisation_to_gamma(trace.lambda, std::stod(r)));

    for (const auto& vname : o.variants) {
      const Variant variant = parse_variant(vname);
      for (Duration gamma : gammas) {
        auto cfg = DiscreteConfig::make(gamma, variant, trace.lambda);
        MethodTrace input = trace;
        Duration step = oracle::exact_tick(trace, cfg);
        Duration horizon = cfg.arrival(trace.size() + 1);
        for (const auto& r : trace.records) horizon += r.delta();
        bool quantised = false;
        if (static_cast<double>(horizon.count()) / static_cast<double>(step.count()) > kMaxSteps) {
          input = quantise(trace, tick);
          cfg = DiscreteConfig::make(std::max(tick, snap(gamma, tick)), variant, trace.lambda);
          step = oracle::exact_tick(input, cfg);
          quantised = true;
        }
        const bool same = simulate(input, cfg) == oracle::oracle_discrete(input, cfg, {step});
        ++checks;
        if (!same) ++mismatches;
        std::cout << (same ? "ok   " : "FAIL ") << path.string() << " discrete " << to_string(variant)
                  << " gamma_ms=" << format_millis(cfg.gamma) << (quantised ? " (quantised)" : "") << '\n';
      }
    }
    const auto c = overheads(trace);
    for (auto b : parse_seconds_list(o.budget_s)) {
      const bool same = cutoff(c, b) == oracle::oracle_cutoff(c, b);
      ++checks;
      if (!same) ++mismatches;
      std::cout << (same ? "ok   " : "FAIL ") << path.string() << " cutoff B_s=" << format_seconds(b) << '\n';
    }
  }
  std::cout << checks - mismatches << "/" << checks << " checks agree with the reference engines\n";
  return mismatches == 0 ? exit_ok : exit_partial;
}

}  // namespace

Command add_oracle_check(CLI::App& root) {
  auto o = std::make_shared<OracleOptions>();
  auto* sub = root.add_subcommand("oracle-check", "Compare the engines against brute-force references on traces");
  sub->add_option("--traces", o->traces, "Trace files (glob, repeatable)")->required();
  sub->add_option("--rho", o->rho, "Utilisation grid")->delimiter(',')->capture_default_str();
  sub->add_option("--gamma-ms", o->gamma_ms, "Inter-arrival grid in ms (overrides --rho)")->delimiter(',');
  sub->add_option("--variant", o->variants, "Variants to check")->delimiter(',')->capture_default_str();
  sub->add_option("--budget-s", o->budget_s, "Budget grid in s")->delimiter(',')->capture_default_str();
  sub->add_option("--tick-us", o->tick_us, "Quantisation tick for long walks")->capture_default_str();
  sub->add_option("--config", o->config, "key=value file mirroring these flags");
  return {sub, [o] { return run_oracle_check(*o); }};
}

}  // namespace tempora::cli
