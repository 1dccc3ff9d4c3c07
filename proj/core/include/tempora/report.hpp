#pragma once

#include "tempora/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tempora {

/// One row per cell with every decomposition term at full precision; terms
/// that do not apply to a protocol are left empty.
void write_decomposition_csv(const std::vector<SweepInput>& inputs, const SweepResult& result, std::ostream& out);

/// Markdown tables: offline accuracy, aggregated utility per protocol,
/// temporal factors, decompositions at the strictest scenario of each
/// protocol, and per-corruption utility for every scenario. Values are
/// percentages; utilities carry 2 decimals, availability and mean
/// responsiveness 1.
void write_tables_markdown(const std::vector<SweepInput>& inputs, const SweepResult& result, std::ostream& out);

/// Per-cell schedule and responsiveness CSVs under `dir` for cells that kept
/// details. Returns the written paths.
std::vector<std::filesystem::path> write_cell_details(const std::vector<SweepInput>& inputs, const SweepResult& result,
                                                      const std::filesystem::path& dir);

/// The columns of a decomposition CSV that analysis needs.
struct DecompositionRow {
  std::string method;
  Scenario scenario;
  std::string corruption;
  std::optional<double> availability;
  std::optional<double> mean_responsiveness;
};

/// Throws ValidationError on a missing column or malformed number.
std::vector<DecompositionRow> read_decomposition_csv(std::istream& in);

struct InsolvencyRow {
  Scenario scenario;
  std::string method;
  double factor = 0.0;  // corruption-mean availability or responsiveness
  std::string competitor;
  double competitor_utility = 0.0;
  double required = 0.0;  // infinite when factor is 0
  bool insolvent = false;
};

/// For each discrete and continuous scenario, the corruption-mean accuracy
/// each method would need to match the competitor's corruption-mean utility.
/// An empty `competitor` picks the best other method per scenario.
std::vector<InsolvencyRow> insolvency_report(const UtilityMatrix& matrix, const std::vector<DecompositionRow>& rows,
                                             const std::string& competitor = "");

void write_insolvency_csv(const std::vector<InsolvencyRow>& rows, std::ostream& out);

}  // namespace tempora
