#include "cli_common.hpp"
#include "commands.hpp"

#include "tempora/amortised.hpp"
#include "tempora/analysis.hpp"
#include "tempora/error.hpp"
#include "tempora/manifest.hpp"
#include "tempora/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace tempora::cli {

namespace {

struct AnalyzeOptions {
  std::string in;
  std::string matrix;
  std::string latency;
  std::string decomposition;
  std::string out;
  std::string baseline = "Standard";
  std::string competitor;
  std::string config;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw UsageError("cannot read " + p.string());
  return f;
}

int run_analyze(const AnalyzeOptions& o) {
  const std::filesystem::path in_dir = o.in;
  auto pick = [&](const std::string& explicit_path, const char* name) -> std::filesystem::path {
    if (!explicit_path.empty()) return explicit_path;
    if (!o.in.empty() && std::filesystem::exists(in_dir / name)) return in_dir / name;
    return {};
  };
  const auto matrix_path = pick(o.matrix, "matrix.csv");
  if (matrix_path.empty()) throw UsageError("no matrix: pass --matrix or --in <dir> containing matrix.csv");
  const auto latency_path = pick(o.latency, "latency.csv");
  const auto decomposition_path = pick(o.decomposition, "decomposition.csv");

  UtilityMatrix matrix;
  {
    auto f = open_input(matrix_path);
    try {
      matrix = read_matrix_csv(f);
    } catch (const ValidationError& e) {
      throw UsageError("malformed matrix " + matrix_path.string() + ": " + e.what());
    }
  }
  LatencyTable latency;
  if (!latency_path.empty()) {
    auto f = open_input(latency_path);
    latency = read_latency_csv(f);
  }
  std::vector<DecompositionRow> decomposition;
  if (!decomposition_path.empty()) {
    auto f = open_input(decomposition_path);
    decomposition = read_decomposition_csv(f);
  }

  const std::filesystem::path out_dir = o.out.empty() ? in_dir : std::filesystem::path(o.out);
  if (out_dir.empty()) throw UsageError("no output directory: pass --out");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file(out_dir / name, content);
    outputs.push_back(name);
  };

  const auto cells = winners(matrix, latency);
  {
    std::ostringstream s;
    write_winners_csv(matrix, cells, s);
    emit("winners.csv", s.str());
  }
  {
    std::ostringstream s;
    write_winners_markdown(matrix, cells, s);
    emit("winners.md", s.str());
  }
  {
    std::ostringstream s;
    s << "protocol,parameter,aggregation,corruption,r_s\n";
    for (const auto& r : offline_rank_correlation(matrix)) {
      const auto& sc = matrix.scenarios()[r.scenario];
      s << to_string(sc.protocol) << ',' << sc.parameter_text() << ',' << to_string(r.aggregation) << ','
        << r.corruption << ',' << (r.r_s ? num(*r.r_s) : "NA") << '\n';
    }
    emit("spearman.csv", s.str());
  }
  {
    std::string baseline = o.baseline;
    if (!matrix.find_method(baseline)) {
      if (matrix.methods().empty()) throw UsageError("matrix has no methods");
      std::cerr << "tempora: warning: baseline '" << baseline << "' not in matrix; using '" << matrix.methods().front()
                << "'\n";
      baseline = matrix.methods().front();
    }
    std::ostringstream s;
    s << "method,cells,wins,losses,win_rate,mean_yielded,sub_baseline,baseline\n";
    for (const auto& m : matrix.methods()) {
      const auto w = win_stats(matrix, m, baseline, latency);
      s << m << ',' << w.cells << ',' << w.wins << ',' << w.losses << ',' << num(w.win_rate) << ','
        << num(w.mean_yielded) << ',' << w.sub_baseline << ',' << baseline << '\n';
    }
    emit("win_stats.csv", s.str());
  }
  if (!decomposition.empty()) {
    std::ostringstream s;
    write_insolvency_csv(insolvency_report(matrix, decomposition, o.competitor), s);
    emit("insolvency.csv", s.str());
  }
  {
    // Frontier over corruption-mean amortised utilities.
    std::vector<ParetoPoint> points;
    for (std::size_t s = 0; s < matrix.scenarios().size(); ++s) {
      const auto& sc = matrix.scenarios()[s];
      if (sc.protocol != Protocol::amortised) continue;
      for (std::size_t m = 0; m < matrix.methods().size(); ++m) {
        double sum = 0.0;
        bool complete = !matrix.corruptions().empty();
        for (std::size_t c = 0; c < matrix.corruptions().size(); ++c) {
          const auto v = matrix.get(m, s, c);
          if (!v) complete = false;
          else sum += *v;
        }
        if (!complete) continue;
        points.push_back({parse_seconds(sc.parameter_text().substr(sc.parameter.size() + 1)),
                          sum / static_cast<double>(matrix.corruptions().size()), matrix.methods()[m]});
      }
    }
    if (!points.empty()) {
      std::ostringstream s;
      write_frontier_csv(points, s);
      emit("frontier.csv", s.str());
    }
  }

  std::vector<std::filesystem::path> inputs{matrix_path};
  if (!latency_path.empty()) inputs.push_back(latency_path);
  if (!decomposition_path.empty()) inputs.push_back(decomposition_path);
  const std::string config = canonical_config({{"baseline", o.baseline}, {"competitor", o.competitor}});
  write_manifest(make_manifest("analyze", config, 0, inputs, out_dir, outputs), out_dir / "analysis_manifest.json");
  std::cerr << "tempora: analysed " << matrix.methods().size() << " methods x " << matrix.cell_count()
            << " cells into " << out_dir.string() << '\n';
  return exit_ok;
}

}  // namespace

Command add_analyze(CLI::App& root) {
  auto o = std::make_shared<AnalyzeOptions>();
  auto* sub = root.add_subcommand("analyze", "Winners, rank correlations, win statistics, insolvency and frontier");
  sub->add_option("--in", o->in, "Directory written by evaluate");
  sub->add_option("--matrix", o->matrix, "Matrix CSV (default <in>/matrix.csv)");
  sub->add_option("--latency", o->latency, "Latency CSV for tie-breaks (default <in>/latency.csv)");
  sub->add_option("--decomposition", o->decomposition, "Decomposition CSV (default <in>/decomposition.csv)");
  sub->add_option("--out", o->out, "Output directory (default <in>)");
  sub->add_option("--baseline", o->baseline, "Baseline method for win statistics")->capture_default_str();
  sub->add_option("--competitor", o->competitor, "Competitor for insolvency (default: best other method)");
  sub->add_option("--config", o->config, "key=value file mirroring these flags");
  return {sub, [o] { return run_analyze(*o); }};
}

}  // namespace tempora::cli
