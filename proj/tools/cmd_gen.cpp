#include "cli_common.hpp"
#include "commands.hpp"

#include "tempora/amortised.hpp"
#include "tempora/error.hpp"
#include "tempora/manifest.hpp"
#include "tempora/synthetic.hpp"
#include "tempora/trace_io.hpp"

#include <iostream>
#include <memory>
#include <set>

namespace tempora::cli {

namespace {

struct GenOptions {
  std::vector<std::string> presets;
  std::vector<std::string> corruptions{"mean"};
  std::size_t n = 781;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "jsonl";
  std::vector<std::string> frozen_budget_s;
  std::vector<std::size_t> frozen_cutoffs;
  std::string config;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Independent, order-free stream seed per generated file.
std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) { return splitmix(base ^ fnv1a(tag)); }

int run_gen(const GenOptions& o) {
  std::vector<std::string> presets;
  for (const auto& p : o.presets) {
    if (p == "all") {
      const auto all = preset_names();
      presets.insert(presets.end(), all.begin(), all.end());
    } else {
      presets.push_back(p);
    }
  }
  std::vector<std::string> corruptions;
  for (const auto& c : o.corruptions) {
    if (c == "all") {
      const auto& all = corruption_labels();
      corruptions.insert(corruptions.end(), all.begin(), all.end());
    } else {
      corruptions.push_back(c);
    }
  }
  if (o.n == 0) throw UsageError("--n must be positive");
  const TraceFormat format = o.format == "csv" ? TraceFormat::csv : TraceFormat::jsonl;
  if (o.format != "csv" && o.format != "jsonl") throw UsageError("--format must be jsonl or csv");
  const auto budgets = parse_seconds_list(o.frozen_budget_s);
  const std::string ext = format == TraceFormat::csv ? ".csv" : ".jsonl";

  const std::filesystem::path out_dir = o.out;
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> outputs;
  for (const auto& name : presets) {
    for (const auto& corruption : corruptions) {
      const SyntheticProfile profile = preset(name, corruption);
      const std::string stem = name + "__" + corruption;
      const auto trace = gen_synthetic(profile, o.n, derive_seed(o.seed, stem));
      write_trace(trace, out_dir / (stem + ext), format);
      outputs.push_back(stem + ext);
      if (format == TraceFormat::csv) outputs.push_back(stem + ext + ".meta.json");

      std::set<std::size_t> cutoffs(o.frozen_cutoffs.begin(), o.frozen_cutoffs.end());
      const auto c = overheads(trace);
      for (auto b : budgets) cutoffs.insert(cutoff(c, b));
      for (std::size_t m : cutoffs) {
        if (m >= o.n) continue;  // fully adapted: nothing frozen
        FrozenRunFile f{trace.method, trace.corruption, trace.lambda, o.n,
                        gen_frozen_run(profile, trace, m, derive_seed(o.seed, stem + "/frozen/" + std::to_string(m)))};
        const std::string fname = "frozen/" + stem + "__m" + std::to_string(m) + ext;
        std::filesystem::create_directories(out_dir / "frozen");
        write_frozen_run(f, out_dir / fname, format);
        outputs.push_back(fname);
        if (format == TraceFormat::csv) outputs.push_back(fname + ".meta.json");
      }
    }
  }

  const std::string config = canonical_config({
      {"preset", join(o.presets, ",")},
      {"corruption", join(o.corruptions, ",")},
      {"n", std::to_string(o.n)},
      {"format", o.format},
      {"frozen-budget-s", join(o.frozen_budget_s, ",")},
  });
  write_manifest(make_manifest("gen", config, o.seed, {}, out_dir, outputs), out_dir / "manifest.json");
  std::cerr << "tempora: wrote " << outputs.size() << " files into " << out_dir.string() << '\n';
  return exit_ok;
}

}  // namespace

Command add_gen(CLI::App& root) {
  auto o = std::make_shared<GenOptions>();
  auto* sub = root.add_subcommand("gen", "Generate synthetic traces from latency presets");
  sub->add_option("--preset", o->presets, "Preset name or 'all' (repeatable)")->required()->delimiter(',');
  sub->add_option("--corruption", o->corruptions, "Corruption label, 'mean' or 'all'")->delimiter(',')
      ->capture_default_str();
  sub->add_option("--n", o->n, "Batches per trace")->capture_default_str();
  sub->add_option("--seed", o->seed, "Base seed")->capture_default_str();
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--format", o->format, "jsonl|csv")->capture_default_str();
  sub->add_option("--frozen-budget-s", o->frozen_budget_s, "Also write frozen runs at the cutoffs of these budgets")
      ->delimiter(',');
  sub->add_option("--frozen-cutoff", o->frozen_cutoffs, "Also write frozen runs at these cutoffs")->delimiter(',');
  sub->add_option("--config", o->config, "key=value file mirroring these flags");
  return {sub, [o] { return run_gen(*o); }};
}

}  // namespace tempora::cli
