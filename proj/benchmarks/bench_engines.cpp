#include "tempora/amortised.hpp"
#include "tempora/continuous.hpp"
#include "tempora/discrete.hpp"
#include "tempora/oracle.hpp"
#include "tempora/sweep.hpp"
#include "tempora/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace tempora;

namespace {

MethodTrace trace_for(const std::string& preset_name, std::size_t n) {
  return gen_synthetic(preset(preset_name), n, 1);
}

void bm_simulate(benchmark::State& state) {
  const auto t = trace_for("eta-table2", static_cast<std::size_t>(state.range(0)));
  const auto cfg = DiscreteConfig::make(utilisation_to_gamma(t.lambda, 0.5), Variant::buffered, t.lambda);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(t, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_simulate)->Arg(781)->Arg(11715);

void bm_oracle(benchmark::State& state) {
  // Quantised to the oracle's default 100 us tick.
  auto t = trace_for("eta-table2", 781);
  for (auto& r : t.records) {
    r.e = r.e / 100'000 * 100'000;
    r.ell = r.ell / 100'000 * 100'000;
  }
  const auto cfg = DiscreteConfig::make(Duration{80'000'000}, Variant::buffered, t.lambda);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::oracle_discrete(t, cfg));
}
BENCHMARK(bm_oracle);

void bm_continuous(benchmark::State& state) {
  const auto t = trace_for("sar-table2", static_cast<std::size_t>(state.range(0)));
  const auto cfg = ContinuousConfig::make(Duration{100'000'000}, t.lambda);
  for (auto _ : state) benchmark::DoNotOptimize(continuous_utility(t, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_continuous)->Arg(781)->Arg(11715);

void bm_cutoff(benchmark::State& state) {
  const auto c = overheads(trace_for("tent-table2", 11715));
  for (auto _ : state) benchmark::DoNotOptimize(cutoff(c, from_seconds(16)));
}
BENCHMARK(bm_cutoff);

void bm_sweep(benchmark::State& state) {
  std::vector<SweepInput> inputs;
  for (const auto& name : preset_names()) inputs.push_back({{gen_synthetic(preset(name), 781, 1), {}}, {}});
  auto spec = SweepSpec::defaults();
  spec.frozen_accuracy = 0.001;
  spec.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(inputs, spec));
}
BENCHMARK(bm_sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
