#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tempora {

enum class Protocol { discrete, continuous, amortised };
const char* to_string(Protocol p);
Protocol parse_protocol(const std::string& text);

/// One temporal scenario: a protocol and its pressure parameter, e.g.
/// {discrete, "rho", 1.0} or {amortised, "B_s", 4}.
struct Scenario {
  Protocol protocol = Protocol::discrete;
  std::string parameter;  // rho | gamma_ms | T_ms | B_s
  double value = 0.0;

  std::string parameter_text() const;  // "rho=0.5"
  std::string label() const;           // "discrete rho=0.5"

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(const std::string& protocol, const std::string& parameter_text);

/// Dense methods x scenarios x corruptions grid; absent cells carry a reason.
class UtilityMatrix {
 public:
  std::size_t add_method(const std::string& method);
  std::size_t add_scenario(const Scenario& scenario);
  std::size_t add_corruption(const std::string& corruption);

  void set(const std::string& method, const Scenario& scenario, const std::string& corruption, double utility);
  void set_absent(const std::string& method, const Scenario& scenario, const std::string& corruption,
                  std::string reason);
  void set_offline(const std::string& method, const std::string& corruption, double accuracy);

  std::optional<double> get(std::size_t m, std::size_t s, std::size_t c) const;
  std::optional<double> offline(std::size_t m, std::size_t c) const;
  const std::string& absent_reason(std::size_t m, std::size_t s, std::size_t c) const;

  const std::vector<std::string>& methods() const { return methods_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  const std::vector<std::string>& corruptions() const { return corruptions_; }

  std::optional<std::size_t> find_method(const std::string& method) const;
  std::size_t cell_count() const { return scenarios_.size() * corruptions_.size(); }
  std::size_t absent_count() const;

 private:
  struct Cell {
    std::optional<double> value;
    std::string reason;
  };
  Cell& cell(std::size_t m, std::size_t s, std::size_t c);
  const Cell* find_cell(std::size_t m, std::size_t s, std::size_t c) const;

  std::vector<std::string> methods_;
  std::vector<Scenario> scenarios_;
  std::vector<std::string> corruptions_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Cell> cells_;
  std::map<std::pair<std::size_t, std::size_t>, double> offline_;
};

/// Descending ranks (1 = best) with average ranks for exact ties.
struct RankVector {
  std::vector<std::string> methods;
  std::vector<double> ranks;

  double of(const std::string& method) const;
};

RankVector rank(std::span<const std::string> methods, std::span<const double> scores);
RankVector rank(std::span<const double> scores);

/// Pearson correlation of the rank vectors, matched by method label. Throws
/// std::invalid_argument for mismatched method sets and std::domain_error
/// when either ranking is constant.
double spearman(const RankVector& a, const RankVector& b);

/// Mean per-batch latency per method, used to break utility ties.
using LatencyTable = std::map<std::string, double>;

struct WinnerCell {
  std::size_t scenario = 0;
  std::size_t corruption = 0;
  std::optional<std::string> winner;  // absent when every method's cell is absent
  double utility = 0.0;
  bool tied = false;
  std::vector<std::string> tied_with;  // other methods at the same utility
};

/// Argmax per (scenario, corruption); ties go to lower mean latency, then
/// lexicographic label, and are flagged.
std::vector<WinnerCell> winners(const UtilityMatrix& matrix, const LatencyTable& latency = {});

struct Insolvency {
  double required = 0.0;
  bool insolvent = false;  // required accuracy exceeds 1
};

/// Accuracy needed to match utility `a0` when value is scaled by `factor`
/// (availability or mean responsiveness). Throws std::invalid_argument
/// unless factor is in (0, 1].
Insolvency insolvency_threshold(double a0, double factor);

struct WinStats {
  std::size_t cells = 0;
  std::size_t wins = 0;
  std::size_t losses = 0;
  double win_rate = 0.0;
  double mean_yielded = 0.0;  // mean (U_winner - U_focus) / U_winner over losses
  std::size_t sub_baseline = 0;
};

/// Throws std::invalid_argument for an unknown focus or baseline label.
WinStats win_stats(const UtilityMatrix& matrix, const std::string& focus, const std::string& baseline = "Standard",
                   const LatencyTable& latency = {});

enum class RankAggregation {
  aggregated_utility,   // rank corruption-mean utilities against corruption-mean offline accuracy
  per_corruption,       // one r_s per corruption
  per_corruption_mean,  // mean of the per-corruption r_s
};
const char* to_string(RankAggregation a);

struct RankCorrelation {
  std::size_t scenario = 0;
  RankAggregation aggregation = RankAggregation::aggregated_utility;
  std::string corruption;  // empty for the aggregate rows
  std::optional<double> r_s;
};

/// Spearman against the offline ranking for every scenario, in all three
/// aggregations. Undefined correlations are reported as absent.
std::vector<RankCorrelation> offline_rank_correlation(const UtilityMatrix& matrix);

// --- I/O -------------------------------------------------------------------

/// CSV `method,protocol,parameter,corruption,utility`; offline accuracy rows
/// use protocol `offline` and an empty parameter; absent cells are `NA`.
void write_matrix_csv(const UtilityMatrix& matrix, std::ostream& out);
UtilityMatrix read_matrix_csv(std::istream& in);

void write_winners_csv(const UtilityMatrix& matrix, std::span<const WinnerCell> cells, std::ostream& out);
void write_winners_markdown(const UtilityMatrix& matrix, std::span<const WinnerCell> cells, std::ostream& out);

/// CSV `method,mean_delta_ms`.
void write_latency_csv(const LatencyTable& latency, std::ostream& out);
LatencyTable read_latency_csv(std::istream& in);

}  // namespace tempora
