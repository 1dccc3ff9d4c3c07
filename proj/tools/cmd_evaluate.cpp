#include "cli_common.hpp"
#include "commands.hpp"

#include "tempora/error.hpp"
#include "tempora/manifest.hpp"
#include "tempora/report.hpp"
#include "tempora/sweep.hpp"
#include "tempora/trace_io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace tempora::cli {

namespace {

struct EvaluateOptions {
  std::vector<std::string> traces;
  std::vector<std::string> frozen;
  std::vector<std::string> rho;
  std::vector<std::string> gamma_ms;
  std::vector<std::string> threshold_ms;
  std::vector<std::string> budget_s;
  std::string variant = "buffered";
  std::string weighting = "per-batch";
  std::string provider_cmd;
  long provider_timeout_ms = 30'000;
  std::optional<double> frozen_accuracy;
  std::string lambda_ms;
  std::string out;
  std::uint64_t seed = 0;
  std::string config;
  bool details = false;
};

std::vector<double> parse_rho(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("malformed rho value '" + s + "'");
    out.push_back(v);
  }
  return out;
}

int run_evaluate(const EvaluateOptions& o) {
  if (!o.rho.empty() && !o.gamma_ms.empty()) throw UsageError("--rho and --gamma-ms are mutually exclusive");

  SweepSpec spec;
  const bool any_grid = !o.rho.empty() || !o.gamma_ms.empty() || !o.threshold_ms.empty() || !o.budget_s.empty();
  if (!any_grid) spec = SweepSpec::defaults();
  if (any_grid) {
    spec.rho = parse_rho(o.rho);
    spec.gamma = parse_millis_list(o.gamma_ms);
    spec.thresholds = parse_millis_list(o.threshold_ms);
    spec.budgets = parse_seconds_list(o.budget_s);
  }
  try {
    spec.variant = parse_variant(o.variant);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  spec.weighting = parse_weighting(o.weighting);
  spec.frozen_accuracy = o.frozen_accuracy;
  if (!o.lambda_ms.empty()) spec.lambda_override = parse_millis_list({o.lambda_ms}).front();
  if (!o.provider_cmd.empty()) spec.provider_cmd = split_command(o.provider_cmd);
  spec.provider_timeout = std::chrono::milliseconds(o.provider_timeout_ms);
  spec.workers = workers_from_environment();
  spec.keep_details = o.details;
  spec.validate();

  const auto trace_paths = expand_globs(o.traces);
  const auto frozen_paths = o.frozen.empty() ? std::vector<std::filesystem::path>{} : expand_globs(o.frozen);

  std::vector<SweepInput> inputs;
  std::vector<std::filesystem::path> digested;
  std::size_t load_failures = 0;
  std::vector<std::string> load_errors;
  for (const auto& p : trace_paths) {
    try {
      inputs.push_back({TraceBundle{load_trace(p), {}}, p});
      digested.push_back(p);
      auto meta = p;
      meta += ".meta.json";
      if (format_from_path(p) == TraceFormat::csv && std::filesystem::exists(meta)) digested.push_back(meta);
    } catch (const std::exception& e) {
      ++load_failures;
      load_errors.push_back(p.string() + ": " + e.what());
      std::cerr << "tempora: skipping " << p.string() << ": " << e.what() << '\n';
    }
  }
  std::map<std::pair<std::string, std::string>, std::size_t> by_key;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& t = inputs[i].bundle.adapted;
    by_key[{t.method, t.corruption}] = i;
  }
  for (const auto& p : frozen_paths) {
    auto f = load_frozen_run(p);
    auto it = by_key.find({f.method, f.corruption});
    if (it == by_key.end()) {
      throw UsageError("frozen run " + p.string() + " has no adapted trace for " + f.method + "/" + f.corruption);
    }
    auto& bundle = inputs[it->second].bundle;
    if (f.n != bundle.adapted.size()) {
      throw UsageError("frozen run " + p.string() + " declares n=" + std::to_string(f.n) + " but the trace has " +
                       std::to_string(bundle.adapted.size()) + " batches");
    }
    bundle.add_frozen(std::move(f.run));
    digested.push_back(p);
  }

  const SweepResult result = run_sweep(inputs, spec);

  const std::filesystem::path out_dir = o.out;
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file(out_dir / name, content);
    outputs.push_back(name);
  };
  {
    std::ostringstream s;
    write_matrix_csv(result.matrix, s);
    emit("matrix.csv", s.str());
  }
  {
    std::ostringstream s;
    write_decomposition_csv(inputs, result, s);
    emit("decomposition.csv", s.str());
  }
  {
    std::ostringstream s;
    write_latency_csv(result.latency, s);
    emit("latency.csv", s.str());
  }
  {
    std::ostringstream s;
    write_tables_markdown(inputs, result, s);
    emit("tables.md", s.str());
  }
  std::vector<std::string> notes = load_errors;
  notes.insert(notes.end(), result.warnings.begin(), result.warnings.end());
  if (!notes.empty()) emit("warnings.txt", join(notes, "\n") + "\n");
  if (o.details) {
    for (const auto& p : write_cell_details(inputs, result, out_dir / "details"))
      outputs.push_back(std::filesystem::relative(p, out_dir).string());
  }

  const std::string config = canonical_config({
      {"traces", join(o.traces, ",")},
      {"frozen", join(o.frozen, ",")},
      {"rho", join(o.rho, ",")},
      {"gamma-ms", join(o.gamma_ms, ",")},
      {"threshold-ms", join(o.threshold_ms, ",")},
      {"budget-s", join(o.budget_s, ",")},
      {"variant", to_string(spec.variant)},
      {"weighting", spec.weighting == Weighting::per_batch ? "per-batch" : "per-sample"},
      {"provider-cmd", o.provider_cmd},
      {"frozen-accuracy", o.frozen_accuracy ? std::to_string(*o.frozen_accuracy) : ""},
      {"lambda-ms", o.lambda_ms},
      {"details", o.details ? "true" : "false"},
  });
  write_manifest(make_manifest("evaluate", config, o.seed, digested, out_dir, outputs), out_dir / "manifest.json");

  for (const auto& w : result.warnings) std::cerr << "tempora: warning: " << w << '\n';
  const std::size_t cells = result.cells.size();
  std::cerr << "tempora: evaluated " << cells - result.failed << "/" << cells << " cells over " << inputs.size()
            << " traces into " << out_dir.string() << '\n';
  if (result.failed > 0 || load_failures > 0) {
    for (const auto& c : result.cells)
      if (!c.error.empty())
        std::cerr << "tempora: cell " << inputs[c.input].bundle.adapted.method << "/"
                  << inputs[c.input].bundle.adapted.corruption << " " << result.scenarios[c.scenario].label()
                  << " failed: " << c.error << '\n';
    return exit_partial;
  }
  return exit_ok;
}

}  // namespace

Command add_evaluate(CLI::App& root) {
  auto o = std::make_shared<EvaluateOptions>();
  auto* sub = root.add_subcommand("evaluate", "Run scenario sweeps over traces and write the utility matrix");
  sub->add_option("--traces", o->traces, "Adapted trace files (glob, repeatable)")->required();
  sub->add_option("--frozen", o->frozen, "Frozen-run files (glob, repeatable)");
  sub->add_option("--rho", o->rho, "Discrete utilisation grid, e.g. 1,0.7,0.5")->delimiter(',');
  sub->add_option("--gamma-ms", o->gamma_ms, "Discrete inter-arrival grid in ms")->delimiter(',');
  sub->add_option("--threshold-ms", o->threshold_ms, "Continuous threshold grid in ms")->delimiter(',');
  sub->add_option("--budget-s", o->budget_s, "Amortised budget grid in s")->delimiter(',');
  sub->add_option("--variant", o->variant, "Discrete variant: buffered|strict")->capture_default_str();
  sub->add_option("--weighting", o->weighting, "Accuracy mean: per-batch|per-sample")->capture_default_str();
  sub->add_option("--provider-cmd", o->provider_cmd,
                  "Child provider command; {trace}, {method}, {corruption} are substituted");
  sub->add_option("--provider-timeout-ms", o->provider_timeout_ms, "Per-response timeout")->capture_default_str();
  sub->add_option("--frozen-accuracy", o->frozen_accuracy, "Frozen accuracy when no frozen run covers the cutoff");
  sub->add_option("--lambda-ms", o->lambda_ms, "Override the trace header lambda");
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--seed", o->seed, "Seed recorded in the manifest")->capture_default_str();
  sub->add_option("--config", o->config, "key=value file mirroring these flags");
  sub->add_flag("--details", o->details, "Also write per-cell schedules and responsiveness");
  return {sub, [o] { return run_evaluate(*o); }};
}

}  // namespace tempora::cli
