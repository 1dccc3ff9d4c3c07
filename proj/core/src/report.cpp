#include "tempora/report.hpp"

#include "tempora/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <istream>
#include <fstream>
#include <map>
#include <ostream>

namespace tempora {

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string full(const std::optional<double>& v) { return v ? full(*v) : std::string(); }

std::string pct(std::optional<double> v, int decimals) {
  if (!v) return "–";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, *v * 100.0);
  return buf;
}

/// Mean over the present values; absent when none are present.
struct Mean {
  double sum = 0.0;
  std::size_t count = 0;
  void add(std::optional<double> v) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  std::optional<double> value() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

void header(std::ostream& out, const std::vector<std::string>& cols) {
  out << '|';
  for (const auto& c : cols) out << ' ' << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i == 0 ? ":---|" : "---:|");
  out << '\n';
}

void row(std::ostream& out, const std::vector<std::string>& cells) {
  out << '|';
  for (const auto& c : cells) out << ' ' << c << " |";
  out << '\n';
}

/// Most demanding scenario of a protocol: highest rho or smallest gamma,
/// smallest T, smallest B. Only scenarios sharing the first one's parameter
/// compete.
std::optional<std::size_t> strictest(const std::vector<Scenario>& scenarios, Protocol p) {
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& sc = scenarios[s];
    if (sc.protocol != p) continue;
    if (!best) {
      best = s;
      continue;
    }
    const auto& b = scenarios[*best];
    const bool higher_is_stricter = sc.parameter == "rho";
    if (sc.parameter != b.parameter) continue;
    if (higher_is_stricter ? sc.value > b.value : sc.value < b.value) best = s;
  }
  return best;
}

}  // namespace

void write_decomposition_csv(const std::vector<SweepInput>& inputs, const SweepResult& result, std::ostream& out) {
  out << "method,protocol,parameter,corruption,provider,lambda_ms,utility,n,served_count,availability,"
         "served_accuracy,mean_accuracy,mean_responsiveness,covariance,alignment,cutoff_m,adapted_fraction,"
         "adapt_accuracy,frozen_accuracy,frozen_source,frozen_run_cutoff,budget_spent_s,error\n";
  for (const auto& cell : result.cells) {
    const auto& t = inputs[cell.input].bundle.adapted;
    const auto& sc = result.scenarios[cell.scenario];
    out << t.method << ',' << to_string(sc.protocol) << ',' << sc.parameter_text() << ',' << t.corruption << ','
        << cell.provider_kind << ',' << format_millis(cell.lambda) << ',' << full(cell.utility) << ',';
    if (cell.discrete) {
      const auto& r = *cell.discrete;
      out << r.n << ',' << r.served_count << ',' << full(r.availability) << ',' << full(r.served_accuracy);
    } else {
      out << t.size() << ",,,";
    }
    out << ',';
    if (cell.continuous) {
      const auto& r = *cell.continuous;
      out << full(r.mean_accuracy) << ',' << full(r.mean_responsiveness) << ',' << full(r.covariance) << ','
          << full(r.alignment);
    } else {
      out << ",,,";
    }
    out << ',';
    if (cell.amortised) {
      const auto& r = *cell.amortised;
      out << r.cutoff_m << ',' << full(r.adapted_fraction) << ',' << full(r.adapt_accuracy) << ','
          << full(r.frozen_accuracy) << ',' << to_string(r.frozen_source) << ','
          << (r.frozen_run_cutoff ? std::to_string(*r.frozen_run_cutoff) : "") << ','
          << format_seconds(r.budget_spent);
    } else {
      out << ",,,,,,";
    }
    out << ',';
    // Errors may hold commas or quotes; quote them for CSV.
    if (!cell.error.empty()) {
      out << '"';
      for (char ch : cell.error) {
        if (ch == '"') out << '"';
        out << (ch == '\n' ? ' ' : ch);
      }
      out << '"';
    }
    out << '\n';
  }
}

void write_tables_markdown(const std::vector<SweepInput>& inputs, const SweepResult& result, std::ostream& out) {
  const auto& matrix = result.matrix;
  const auto& methods = matrix.methods();
  const auto& corruptions = matrix.corruptions();
  const auto& scenarios = result.scenarios;

  // cell lookup by (method, corruption) -> input
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> input_of;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& t = inputs[i].bundle.adapted;
    input_of[{*matrix.find_method(t.method),
              static_cast<std::size_t>(std::find(corruptions.begin(), corruptions.end(), t.corruption) -
                                       corruptions.begin())}] = i;
  }

  out << "# Evaluation tables\n\nValues are percentages.";
  if (result.failed > 0) out << " " << result.failed << " cell(s) failed and are shown as –.";
  out << "\n\n## Offline accuracy\n\n";
  {
    std::vector<std::string> cols{"Method"};
    for (const auto& c : corruptions) cols.push_back(c);
    cols.push_back("Mean");
    header(out, cols);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<std::string> r{methods[m]};
      Mean mean;
      for (std::size_t c = 0; c < corruptions.size(); ++c) {
        const auto v = matrix.offline(m, c);
        mean.add(v);
        r.push_back(pct(v, 2));
      }
      r.push_back(pct(mean.value(), 2));
      row(out, r);
    }
  }

  for (Protocol p : {Protocol::discrete, Protocol::continuous, Protocol::amortised}) {
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
      if (scenarios[s].protocol == p) idx.push_back(s);
    if (idx.empty()) continue;
    out << "\n## " << to_string(p) << " utility (mean over corruptions)\n\n";
    std::vector<std::string> cols{"Method"};
    for (auto s : idx) cols.push_back(scenarios[s].parameter_text());
    header(out, cols);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<std::string> r{methods[m]};
      for (auto s : idx) {
        Mean mean;
        bool complete = true;
        for (std::size_t c = 0; c < corruptions.size(); ++c) {
          const auto v = matrix.get(m, s, c);
          complete = complete && v.has_value();
          mean.add(v);
        }
        r.push_back(complete ? pct(mean.value(), 2) : "–");
      }
      row(out, r);
    }
  }

  out << "\n## Temporal factors (mean per batch)\n\n";
  header(out, {"Method", "e (ms)", "ell (ms)", "delta (ms)", "lambda (ms)"});
  for (std::size_t m = 0; m < methods.size(); ++m) {
    Mean e, ell, delta;
    std::string lambda;
    for (const auto& in : inputs) {
      const auto& t = in.bundle.adapted;
      if (t.method != methods[m] || t.size() == 0) continue;
      const auto s = summarize_latency(t);
      e.add(s.mean_e_ms);
      ell.add(s.mean_ell_ms);
      delta.add(s.mean_delta_ms);
      lambda = format_millis(t.lambda);
    }
    char buf[3][32];
    std::snprintf(buf[0], 32, "%.1f", e.value().value_or(0.0));
    std::snprintf(buf[1], 32, "%.1f", ell.value().value_or(0.0));
    std::snprintf(buf[2], 32, "%.1f", delta.value().value_or(0.0));
    row(out, {methods[m], buf[0], buf[1], buf[2], lambda});
  }

  auto per_method = [&](std::size_t s, std::size_t m, auto&& visit) {
    for (std::size_t c = 0; c < corruptions.size(); ++c) {
      auto it = input_of.find({m, c});
      if (it == input_of.end()) continue;
      visit(result.cell(it->second, s));
    }
  };

  if (auto s = strictest(scenarios, Protocol::discrete)) {
    out << "\n## Discrete decomposition at " << scenarios[*s].parameter_text() << "\n\n";
    header(out, {"Method", "alpha", "a_served", "U"});
    for (std::size_t m = 0; m < methods.size(); ++m) {
      Mean alpha, acc, u;
      per_method(*s, m, [&](const CellResult& cell) {
        if (!cell.discrete) return;
        alpha.add(cell.discrete->availability);
        acc.add(cell.discrete->served_accuracy);
        u.add(cell.utility);
      });
      row(out, {methods[m], pct(alpha.value(), 1), pct(acc.value(), 2), pct(u.value(), 2)});
    }
  }
  if (auto s = strictest(scenarios, Protocol::continuous)) {
    out << "\n## Continuous decomposition at " << scenarios[*s].parameter_text() << "\n\n";
    header(out, {"Method", "a_bar", "kappa_bar", "alignment", "U"});
    for (std::size_t m = 0; m < methods.size(); ++m) {
      Mean acc, kappa, align, u;
      per_method(*s, m, [&](const CellResult& cell) {
        if (!cell.continuous) return;
        acc.add(cell.continuous->mean_accuracy);
        kappa.add(cell.continuous->mean_responsiveness);
        align.add(cell.continuous->alignment);
        u.add(cell.utility);
      });
      char buf[32] = "–";
      if (auto v = align.value()) std::snprintf(buf, sizeof buf, "%.3f", *v);
      row(out, {methods[m], pct(acc.value(), 2), pct(kappa.value(), 1), buf, pct(u.value(), 2)});
    }
  }
  if (auto s = strictest(scenarios, Protocol::amortised)) {
    out << "\n## Amortised decomposition at " << scenarios[*s].parameter_text() << "\n\n";
    header(out, {"Method", "m", "beta", "a_adapt", "a_frozen", "U"});
    for (std::size_t m = 0; m < methods.size(); ++m) {
      Mean cut, beta, adapt, frozen, u;
      per_method(*s, m, [&](const CellResult& cell) {
        if (!cell.amortised) return;
        cut.add(static_cast<double>(cell.amortised->cutoff_m));
        beta.add(cell.amortised->adapted_fraction);
        adapt.add(cell.amortised->adapt_accuracy);
        frozen.add(cell.amortised->frozen_accuracy);
        u.add(cell.utility);
      });
      char buf[32] = "–";
      if (auto v = cut.value()) std::snprintf(buf, sizeof buf, "%.1f", *v);
      row(out, {methods[m], buf, pct(beta.value(), 1), pct(adapt.value(), 2), pct(frozen.value(), 2),
                pct(u.value(), 2)});
    }
  }

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    out << "\n## " << scenarios[s].label() << " per corruption\n\n";
    std::vector<std::string> cols{"Method"};
    for (const auto& c : corruptions) cols.push_back(c);
    header(out, cols);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<std::string> r{methods[m]};
      for (std::size_t c = 0; c < corruptions.size(); ++c) r.push_back(pct(matrix.get(m, s, c), 2));
      row(out, r);
    }
  }
}

std::vector<std::filesystem::path> write_cell_details(const std::vector<SweepInput>& inputs, const SweepResult& result,
                                                      const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(dir);
  for (const auto& cell : result.cells) {
    const auto& t = inputs[cell.input].bundle.adapted;
    const auto& sc = result.scenarios[cell.scenario];
    const std::string stem = t.method + "__" + t.corruption + "__" + to_string(sc.protocol) + "_" + sc.parameter_text();
    if (cell.schedule) {
      auto path = dir / (stem + "__schedule.csv");
      std::ofstream f(path, std::ios::binary);
      write_schedule_csv(*cell.schedule, f);
      written.push_back(path);
    }
    if (cell.continuous && !cell.continuous->per_batch.empty()) {
      auto path = dir / (stem + "__responsiveness.csv");
      std::ofstream f(path, std::ios::binary);
      write_responsiveness_csv(*cell.continuous, f);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace tempora

namespace tempora {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  return out;
}

std::optional<double> optional_number(const std::string& text, std::size_t line_no, const std::string& field) {
  if (text.empty() || text == "NA") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(ValidationKind::malformed_value, line_no, field,
                        "malformed " + field + " '" + text + "' at line " + std::to_string(line_no));
}

}  // namespace

std::vector<DecompositionRow> read_decomposition_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(ValidationKind::header, 0, "", "empty decomposition file");
  const auto cols = split_csv(line);
  auto col = [&](const std::string& name) {
    auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) throw ValidationError(ValidationKind::header, 0, name, "decomposition file lacks column " + name);
    return static_cast<std::size_t>(it - cols.begin());
  };
  const std::size_t c_method = col("method"), c_proto = col("protocol"), c_param = col("parameter"),
                    c_corr = col("corruption"), c_alpha = col("availability"), c_kappa = col("mean_responsiveness");

  std::vector<DecompositionRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() < cols.size()) {
      throw ValidationError(ValidationKind::missing_field, line_no, "",
                            "decomposition line " + std::to_string(line_no) + " has too few fields");
    }
    DecompositionRow r;
    r.method = f[c_method];
    r.scenario = parse_scenario(f[c_proto], f[c_param]);
    r.corruption = f[c_corr];
    r.availability = optional_number(f[c_alpha], line_no, "availability");
    r.mean_responsiveness = optional_number(f[c_kappa], line_no, "mean_responsiveness");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<InsolvencyRow> insolvency_report(const UtilityMatrix& matrix, const std::vector<DecompositionRow>& rows,
                                             const std::string& competitor) {
  const auto& methods = matrix.methods();
  const auto& corruptions = matrix.corruptions();
  if (!competitor.empty() && !matrix.find_method(competitor)) {
    throw std::invalid_argument("unknown competitor method '" + competitor + "'");
  }

  // Corruption-mean utility per (method, scenario), complete rows only.
  auto mean_utility = [&](std::size_t m, std::size_t s) -> std::optional<double> {
    Mean mean;
    for (std::size_t c = 0; c < corruptions.size(); ++c) {
      const auto v = matrix.get(m, s, c);
      if (!v) return std::nullopt;
      mean.add(v);
    }
    return mean.value();
  };

  std::vector<InsolvencyRow> out;
  for (std::size_t s = 0; s < matrix.scenarios().size(); ++s) {
    const Scenario& sc = matrix.scenarios()[s];
    if (sc.protocol == Protocol::amortised) continue;

    for (std::size_t m = 0; m < methods.size(); ++m) {
      Mean factor;
      for (const auto& r : rows) {
        if (r.method != methods[m] || !(r.scenario == sc)) continue;
        factor.add(sc.protocol == Protocol::discrete ? r.availability : r.mean_responsiveness);
      }
      if (!factor.value()) continue;

      std::optional<std::size_t> rival;
      std::optional<double> rival_u;
      for (std::size_t k = 0; k < methods.size(); ++k) {
        if (k == m || (!competitor.empty() && methods[k] != competitor)) continue;
        const auto u = mean_utility(k, s);
        if (u && (!rival_u || *u > *rival_u)) {
          rival = k;
          rival_u = u;
        }
      }
      if (!rival) continue;

      InsolvencyRow row;
      row.scenario = sc;
      row.method = methods[m];
      row.factor = *factor.value();
      row.competitor = methods[*rival];
      row.competitor_utility = *rival_u;
      if (row.factor > 0.0) {
        const auto ins = insolvency_threshold(row.competitor_utility, std::min(row.factor, 1.0));
        row.required = ins.required;
        row.insolvent = ins.insolvent;
      } else {
        row.required = std::numeric_limits<double>::infinity();
        row.insolvent = true;
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

void write_insolvency_csv(const std::vector<InsolvencyRow>& rows, std::ostream& out) {
  out << "protocol,parameter,method,factor,competitor,competitor_utility,required_accuracy,insolvent\n";
  for (const auto& r : rows) {
    out << to_string(r.scenario.protocol) << ',' << r.scenario.parameter_text() << ',' << r.method << ','
        << full(r.factor) << ',' << r.competitor << ',' << full(r.competitor_utility) << ','
        << (std::isinf(r.required) ? std::string("inf") : full(r.required)) << ',' << (r.insolvent ? 1 : 0) << '\n';
  }
}

}  // namespace tempora
