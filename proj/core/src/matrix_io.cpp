#include "tempora/analysis.hpp"

#include "tempora/error.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace tempora {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(ValidationKind::malformed_value, line_no, "utility",
                          "malformed utility '" + text + "' at line " + std::to_string(line_no));
  }
}

// Short codes for the Markdown winner grid: first letter, widened until unique.
std::map<std::string, std::string> short_codes(const std::vector<std::string>& methods) {
  std::map<std::string, std::string> codes;
  for (std::size_t len = 1;; ++len) {
    codes.clear();
    std::map<std::string, int> seen;
    for (const auto& m : methods) {
      std::string code = m.substr(0, std::min(len, m.size()));
      codes[m] = code;
      ++seen[code];
    }
    const bool unique = std::all_of(seen.begin(), seen.end(), [](const auto& kv) { return kv.second == 1; });
    const bool exhausted = std::all_of(methods.begin(), methods.end(), [&](const auto& m) { return m.size() <= len; });
    if (unique || exhausted) return codes;
  }
}

}  // namespace

void write_matrix_csv(const UtilityMatrix& matrix, std::ostream& out) {
  out << "method,protocol,parameter,corruption,utility\n";
  const auto& methods = matrix.methods();
  const auto& corruptions = matrix.corruptions();
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t c = 0; c < corruptions.size(); ++c) {
      if (const auto o = matrix.offline(m, c)) {
        out << methods[m] << ",offline,," << corruptions[c] << ',' << num(*o) << '\n';
      }
    }
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t s = 0; s < matrix.scenarios().size(); ++s) {
      const auto& scenario = matrix.scenarios()[s];
      for (std::size_t c = 0; c < corruptions.size(); ++c) {
        const auto u = matrix.get(m, s, c);
        out << methods[m] << ',' << to_string(scenario.protocol) << ',' << scenario.parameter_text() << ','
            << corruptions[c] << ',' << (u ? num(*u) : "NA") << '\n';
      }
    }
  }
}

UtilityMatrix read_matrix_csv(std::istream& in) {
  UtilityMatrix matrix;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (header) {
      header = false;
      const std::vector<std::string> expected{"method", "protocol", "parameter", "corruption", "utility"};
      if (cells != expected) {
        throw ValidationError(ValidationKind::header, 0, "header",
                              "matrix CSV header must be method,protocol,parameter,corruption,utility");
      }
      continue;
    }
    if (cells.size() != 5) {
      throw ValidationError(ValidationKind::malformed_value, line_no, "",
                            "expected 5 columns at line " + std::to_string(line_no));
    }
    const auto& method = cells[0];
    const auto& corruption = cells[3];
    if (method.empty() || corruption.empty()) {
      throw ValidationError(ValidationKind::missing_field, line_no, method.empty() ? "method" : "corruption",
                            "missing label at line " + std::to_string(line_no));
    }
    if (cells[1] == "offline") {
      matrix.set_offline(method, corruption, parse_double(cells[4], line_no));
      continue;
    }
    Scenario scenario;
    try {
      scenario = parse_scenario(cells[1], cells[2]);
    } catch (const ConfigError& e) {
      throw ValidationError(ValidationKind::malformed_value, line_no, "parameter",
                            std::string(e.what()) + " at line " + std::to_string(line_no));
    }
    if (cells[4] == "NA" || cells[4].empty()) {
      matrix.set_absent(method, scenario, corruption, "absent in input");
    } else {
      matrix.set(method, scenario, corruption, parse_double(cells[4], line_no));
    }
  }
  if (header) throw ValidationError(ValidationKind::header, 0, "header", "empty matrix file");
  return matrix;
}

void write_winners_csv(const UtilityMatrix& matrix, std::span<const WinnerCell> cells, std::ostream& out) {
  out << "protocol,parameter,corruption,winner,utility,tied,tied_with\n";
  for (const auto& cell : cells) {
    const auto& s = matrix.scenarios()[cell.scenario];
    std::string tied_with;
    for (const auto& t : cell.tied_with) tied_with += (tied_with.empty() ? "" : ";") + t;
    out << to_string(s.protocol) << ',' << s.parameter_text() << ',' << matrix.corruptions()[cell.corruption] << ','
        << cell.winner.value_or("NA") << ',' << (cell.winner ? num(cell.utility) : "NA") << ','
        << (cell.tied ? 1 : 0) << ',' << tied_with << '\n';
  }
}

void write_winners_markdown(const UtilityMatrix& matrix, std::span<const WinnerCell> cells, std::ostream& out) {
  const auto codes = short_codes(matrix.methods());
  const auto& scenarios = matrix.scenarios();
  out << "| Corruption |";
  for (const auto& s : scenarios) out << ' ' << to_string(s.protocol)[0] << ' ' << s.parameter_text() << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < scenarios.size(); ++i) out << ":-:|";
  out << '\n';

  std::map<std::string, std::size_t> counts;
  for (std::size_t c = 0; c < matrix.corruptions().size(); ++c) {
    out << "| " << matrix.corruptions()[c] << " |";
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      auto it = std::find_if(cells.begin(), cells.end(),
                             [&](const WinnerCell& w) { return w.scenario == s && w.corruption == c; });
      if (it == cells.end() || !it->winner) {
        out << " - |";
        continue;
      }
      ++counts[*it->winner];
      out << ' ' << codes.at(*it->winner) << (it->tied ? "*" : "") << " |";
    }
    out << '\n';
  }
  out << "\nWins:";
  for (const auto& m : matrix.methods()) {
    if (counts[m] > 0) out << ' ' << codes.at(m) << '=' << m << " (" << counts[m] << ")";
  }
  out << "\n\n`*` marks a tie broken by mean latency, then label.\n";
}

void write_latency_csv(const LatencyTable& latency, std::ostream& out) {
  out << "method,mean_delta_ms\n";
  for (const auto& [m, ms] : latency) out << m << ',' << num(ms) << '\n';
}

LatencyTable read_latency_csv(std::istream& in) {
  LatencyTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() < 2) {
      throw ValidationError(ValidationKind::malformed_value, line_no, "", "malformed latency row " + std::to_string(line_no));
    }
    t[cells[0]] = parse_double(cells[1], line_no);
  }
  return t;
}

}  // namespace tempora
