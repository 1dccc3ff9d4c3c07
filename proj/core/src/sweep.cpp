#include "tempora/sweep.hpp"

#include "tempora/error.hpp"
#include "tempora/provider.hpp"
#include "tempora/session.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <cstdlib>
#include <set>
#include <thread>

namespace tempora {

SweepSpec SweepSpec::defaults() {
  SweepSpec s;
  s.rho = {1.00, 0.70, 0.50, 0.35, 0.25};
  for (int t : {50, 100, 200, 400, 1000}) s.thresholds.push_back(from_millis(t));
  for (int b : {1, 2, 4, 8, 16, 32}) s.budgets.push_back(from_seconds(b));
  return s;
}

void SweepSpec::validate() const {
  if (!rho.empty() && !gamma.empty()) throw ConfigError("rho and gamma grids are mutually exclusive");
  for (double r : rho)
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("rho must lie in (0, 1], got " + std::to_string(r));
  for (auto g : gamma)
    if (g.count() <= 0) throw ConfigError("gamma must be positive");
  for (auto t : thresholds)
    if (t.count() <= 0) throw ConfigError("threshold T must be positive");
  for (auto b : budgets)
    if (b.count() < 0) throw ConfigError("budget B must be non-negative");
  if (rho.empty() && gamma.empty() && thresholds.empty() && budgets.empty()) throw ConfigError("no scenarios to run");
  if (frozen_accuracy && !(*frozen_accuracy >= 0.0 && *frozen_accuracy <= 1.0))
    throw ConfigError("frozen accuracy must lie in [0, 1]");
  if (lambda_override && lambda_override->count() <= 0) throw ConfigError("lambda must be positive");
}

std::vector<Scenario> SweepSpec::scenarios() const {
  std::vector<Scenario> out;
  for (double r : rho) out.push_back({Protocol::discrete, "rho", r});
  for (auto g : gamma) out.push_back({Protocol::discrete, "gamma_ms", to_millis(g)});
  for (auto t : thresholds) out.push_back({Protocol::continuous, "T_ms", to_millis(t)});
  for (auto b : budgets) out.push_back({Protocol::amortised, "B_s", to_seconds(b)});
  return out;
}

std::size_t workers_from_environment() {
  if (const char* env = std::getenv("TEMPORA_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::string substitute(std::string arg, const SweepInput& in) {
  const std::pair<const char*, std::string> keys[] = {
      {"{trace}", in.source.string()},
      {"{method}", in.bundle.adapted.method},
      {"{corruption}", in.bundle.adapted.corruption},
  };
  for (const auto& [key, value] : keys) {
    for (auto pos = arg.find(key); pos != std::string::npos; pos = arg.find(key, pos + value.size()))
      arg.replace(pos, std::string_view(key).size(), value);
  }
  return arg;
}

void evaluate_cell(const SweepInput& in, const SweepSpec& spec, std::size_t s, CellResult& out) {
  const MethodTrace& trace = in.bundle.adapted;
  const Duration lambda = spec.lambda_override.value_or(trace.lambda);
  out.lambda = lambda;

  std::unique_ptr<Provider> provider;
  if (spec.provider_cmd.empty()) {
    out.provider_kind = "replay";
  } else {
    std::vector<std::string> argv;
    for (const auto& a : spec.provider_cmd) argv.push_back(substitute(a, in));
    provider = std::make_unique<ExternalProvider>(std::move(argv), spec.provider_timeout);
    out.provider_kind = "external";
  }
  auto hello = [&](Protocol p) { return Handshake{trace.method, lambda, trace.size(), to_string(p)}; };

  const std::size_t n_discrete = spec.rho.size() + spec.gamma.size();
  if (s < n_discrete) {
    const Duration gamma =
        s < spec.rho.size() ? utilisation_to_gamma(lambda, spec.rho[s]) : spec.gamma[s - spec.rho.size()];
    const auto cfg = DiscreteConfig::make(gamma, spec.variant, lambda);
    if (provider) {
      auto session = run_discrete_session(*provider, hello(Protocol::discrete), cfg, spec.weighting);
      out.discrete = session.report;
      if (spec.keep_details) out.schedule = std::move(session.schedule);
    } else {
      auto schedule = simulate(trace, cfg);
      out.discrete = discrete_utility(schedule, trace, spec.weighting);
      if (spec.keep_details) out.schedule = std::move(schedule);
    }
    out.utility = out.discrete->utility;
    return;
  }
  s -= n_discrete;
  if (s < spec.thresholds.size()) {
    const auto cfg = ContinuousConfig::make(spec.thresholds[s], lambda);
    if (provider) {
      out.continuous = run_continuous_session(*provider, hello(Protocol::continuous), cfg, spec.keep_details).report;
    } else {
      out.continuous = continuous_utility(trace, cfg, spec.keep_details);
    }
    out.utility = out.continuous->utility;
    return;
  }
  s -= spec.thresholds.size();
  auto cfg = AmortisedConfig::make(spec.budgets.at(s), lambda, spec.frozen_accuracy);
  cfg.weighting = spec.weighting;
  if (provider) {
    out.amortised = run_amortised_session(*provider, hello(Protocol::amortised), cfg).report;
  } else {
    out.amortised = amortised_utility(in.bundle, cfg);
  }
  out.utility = out.amortised->utility;
}

}  // namespace

SweepResult run_sweep(const std::vector<SweepInput>& inputs, const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.scenarios = spec.scenarios();

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& in : inputs) {
    const auto& t = in.bundle.adapted;
    if (!seen.emplace(t.method, t.corruption).second) {
      throw ConfigError("duplicate trace for method '" + t.method + "' corruption '" + t.corruption + "'");
    }
    if (spec.lambda_override && *spec.lambda_override != t.lambda) {
      result.warnings.push_back("lambda override " + format_millis(*spec.lambda_override) + " ms differs from '" +
                                t.method + "/" + t.corruption + "' header value " + format_millis(t.lambda) + " ms");
    }
  }

  const std::size_t n_scen = result.scenarios.size();
  result.cells.resize(inputs.size() * n_scen);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < result.cells.size(); k = next++) {
      CellResult& cell = result.cells[k];
      cell.input = k / n_scen;
      cell.scenario = k % n_scen;
      try {
        evaluate_cell(inputs[cell.input], spec, cell.scenario, cell);
      } catch (const std::exception& e) {
        cell.utility.reset();
        cell.error = e.what();
      }
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(spec.workers, 1), std::max<std::size_t>(result.cells.size(), 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  // Single writer from here on, in input order.
  auto& matrix = result.matrix;
  std::map<std::string, std::pair<double, std::size_t>> delta_sum;
  for (const auto& in : inputs) {
    const auto& t = in.bundle.adapted;
    matrix.add_method(t.method);
    matrix.add_corruption(t.corruption);
    if (t.size() > 0) {
      matrix.set_offline(t.method, t.corruption, accuracy_mean(t.records, spec.weighting));
      auto& [sum, count] = delta_sum[t.method];
      sum += summarize_latency(t).mean_delta_ms;
      ++count;
    }
  }
  for (const auto& sc : result.scenarios) matrix.add_scenario(sc);
  for (const auto& [method, acc] : delta_sum) result.latency[method] = acc.first / static_cast<double>(acc.second);

  for (const auto& cell : result.cells) {
    const auto& t = inputs[cell.input].bundle.adapted;
    const auto& sc = result.scenarios[cell.scenario];
    if (cell.utility) {
      matrix.set(t.method, sc, t.corruption, *cell.utility);
      if (cell.amortised)
        for (const auto& w : cell.amortised->warnings) result.warnings.push_back(t.method + "/" + t.corruption + " " + sc.label() + ": " + w);
    } else {
      matrix.set_absent(t.method, sc, t.corruption, cell.error);
      ++result.failed;
    }
  }
  return result;
}

}  // namespace tempora
