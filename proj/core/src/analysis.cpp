#include "tempora/analysis.hpp"

#include "tempora/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace tempora {

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::discrete: return "discrete";
    case Protocol::continuous: return "continuous";
    case Protocol::amortised: return "amortised";
  }
  return "discrete";
}

Protocol parse_protocol(const std::string& text) {
  if (text == "discrete") return Protocol::discrete;
  if (text == "continuous") return Protocol::continuous;
  if (text == "amortised") return Protocol::amortised;
  throw ConfigError("unknown protocol '" + text + "'");
}

std::string Scenario::parameter_text() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.10g", parameter.c_str(), value);
  return buf;
}

std::string Scenario::label() const { return std::string(to_string(protocol)) + " " + parameter_text(); }

Scenario parse_scenario(const std::string& protocol, const std::string& parameter_text) {
  const auto eq = parameter_text.find('=');
  if (eq == std::string::npos) throw ConfigError("scenario parameter '" + parameter_text + "' is not key=value");
  Scenario s;
  s.protocol = parse_protocol(protocol);
  s.parameter = parameter_text.substr(0, eq);
  try {
    std::size_t used = 0;
    s.value = std::stod(parameter_text.substr(eq + 1), &used);
    if (used != parameter_text.size() - eq - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("scenario parameter '" + parameter_text + "' has a non-numeric value");
  }
  return s;
}

// --- UtilityMatrix -----------------------------------------------------------

namespace {

template <typename T>
std::size_t intern(std::vector<T>& items, const T& item) {
  auto it = std::find(items.begin(), items.end(), item);
  if (it != items.end()) return static_cast<std::size_t>(it - items.begin());
  items.push_back(item);
  return items.size() - 1;
}

}  // namespace

std::size_t UtilityMatrix::add_method(const std::string& method) { return intern(methods_, method); }
std::size_t UtilityMatrix::add_scenario(const Scenario& scenario) { return intern(scenarios_, scenario); }
std::size_t UtilityMatrix::add_corruption(const std::string& corruption) { return intern(corruptions_, corruption); }

UtilityMatrix::Cell& UtilityMatrix::cell(std::size_t m, std::size_t s, std::size_t c) { return cells_[{m, s, c}]; }

const UtilityMatrix::Cell* UtilityMatrix::find_cell(std::size_t m, std::size_t s, std::size_t c) const {
  auto it = cells_.find({m, s, c});
  return it == cells_.end() ? nullptr : &it->second;
}

void UtilityMatrix::set(const std::string& method, const Scenario& scenario, const std::string& corruption,
                        double utility) {
  auto& c = cell(add_method(method), add_scenario(scenario), add_corruption(corruption));
  c.value = utility;
  c.reason.clear();
}

void UtilityMatrix::set_absent(const std::string& method, const Scenario& scenario, const std::string& corruption,
                               std::string reason) {
  auto& c = cell(add_method(method), add_scenario(scenario), add_corruption(corruption));
  c.value.reset();
  c.reason = std::move(reason);
}

void UtilityMatrix::set_offline(const std::string& method, const std::string& corruption, double accuracy) {
  offline_[{add_method(method), add_corruption(corruption)}] = accuracy;
}

std::optional<double> UtilityMatrix::get(std::size_t m, std::size_t s, std::size_t c) const {
  const Cell* cell = find_cell(m, s, c);
  return cell ? cell->value : std::nullopt;
}

std::optional<double> UtilityMatrix::offline(std::size_t m, std::size_t c) const {
  auto it = offline_.find({m, c});
  if (it == offline_.end()) return std::nullopt;
  return it->second;
}

const std::string& UtilityMatrix::absent_reason(std::size_t m, std::size_t s, std::size_t c) const {
  static const std::string missing = "cell not evaluated";
  const Cell* cell = find_cell(m, s, c);
  return cell ? cell->reason : missing;
}

std::optional<std::size_t> UtilityMatrix::find_method(const std::string& method) const {
  auto it = std::find(methods_.begin(), methods_.end(), method);
  if (it == methods_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - methods_.begin());
}

std::size_t UtilityMatrix::absent_count() const {
  std::size_t absent = 0;
  for (std::size_t m = 0; m < methods_.size(); ++m)
    for (std::size_t s = 0; s < scenarios_.size(); ++s)
      for (std::size_t c = 0; c < corruptions_.size(); ++c)
        if (!get(m, s, c)) ++absent;
  return absent;
}

// --- Ranking -----------------------------------------------------------------

double RankVector::of(const std::string& method) const {
  auto it = std::find(methods.begin(), methods.end(), method);
  if (it == methods.end()) throw std::invalid_argument("method '" + method + "' not in ranking");
  return ranks[static_cast<std::size_t>(it - methods.begin())];
}

RankVector rank(std::span<const std::string> methods, std::span<const double> scores) {
  if (methods.size() != scores.size()) throw std::invalid_argument("rank: label and score counts differ");
  if (scores.size() < 2) throw std::invalid_argument("rank needs at least two entries");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RankVector out;
  out.methods.assign(methods.begin(), methods.end());
  out.ranks.assign(scores.size(), 0.0);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = shared;
    i = j + 1;
  }
  return out;
}

RankVector rank(std::span<const double> scores) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < scores.size(); ++i) labels.push_back(std::to_string(i));
  return rank(labels, scores);
}

double spearman(const RankVector& a, const RankVector& b) {
  if (a.methods.size() != b.methods.size()) throw std::invalid_argument("spearman: method sets differ in size");
  std::vector<double> x = a.ranks;
  std::vector<double> y;
  y.reserve(x.size());
  for (const auto& m : a.methods) {
    auto it = std::find(b.methods.begin(), b.methods.end(), m);
    if (it == b.methods.end()) throw std::invalid_argument("spearman: method '" + m + "' missing from second ranking");
    y.push_back(b.ranks[static_cast<std::size_t>(it - b.methods.begin())]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("spearman undefined for a constant ranking");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// --- Winners -----------------------------------------------------------------

std::vector<WinnerCell> winners(const UtilityMatrix& matrix, const LatencyTable& latency) {
  std::vector<WinnerCell> out;
  const auto& methods = matrix.methods();
  auto latency_of = [&](const std::string& m) {
    auto it = latency.find(m);
    return it == latency.end() ? std::numeric_limits<double>::infinity() : it->second;
  };
  for (std::size_t s = 0; s < matrix.scenarios().size(); ++s) {
    for (std::size_t c = 0; c < matrix.corruptions().size(); ++c) {
      WinnerCell cell{s, c, std::nullopt, 0.0, false, {}};
      std::vector<std::size_t> best;
      double best_u = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto u = matrix.get(m, s, c);
        if (!u) continue;
        if (*u > best_u) {
          best_u = *u;
          best = {m};
        } else if (*u == best_u) {
          best.push_back(m);
        }
      }
      if (!best.empty()) {
        std::sort(best.begin(), best.end(), [&](std::size_t a, std::size_t b) {
          const double la = latency_of(methods[a]);
          const double lb = latency_of(methods[b]);
          if (la != lb) return la < lb;
          return methods[a] < methods[b];
        });
        cell.winner = methods[best.front()];
        cell.utility = best_u;
        cell.tied = best.size() > 1;
        for (std::size_t k = 1; k < best.size(); ++k) cell.tied_with.push_back(methods[best[k]]);
      }
      out.push_back(std::move(cell));
    }
  }
  return out;
}

Insolvency insolvency_threshold(double a0, double factor) {
  if (!(factor > 0.0) || factor > 1.0) throw std::invalid_argument("insolvency factor must lie in (0, 1]");
  Insolvency r;
  r.required = a0 / factor;
  r.insolvent = r.required > 1.0;
  return r;
}

WinStats win_stats(const UtilityMatrix& matrix, const std::string& focus, const std::string& baseline,
                   const LatencyTable& latency) {
  const auto f = matrix.find_method(focus);
  if (!f) throw std::invalid_argument("unknown method '" + focus + "'");
  const auto b = matrix.find_method(baseline);
  if (!b) throw std::invalid_argument("unknown baseline method '" + baseline + "'");

  WinStats stats;
  double yielded = 0.0;
  for (const auto& cell : winners(matrix, latency)) {
    if (!cell.winner) continue;
    const auto u = matrix.get(*f, cell.scenario, cell.corruption);
    ++stats.cells;
    if (*cell.winner == focus) {
      ++stats.wins;
    } else {
      ++stats.losses;
      const double focus_u = u.value_or(0.0);
      if (cell.utility > 0.0) yielded += (cell.utility - focus_u) / cell.utility;
    }
    const auto base_u = matrix.get(*b, cell.scenario, cell.corruption);
    if (u && base_u && *u < *base_u) ++stats.sub_baseline;
  }
  if (stats.cells > 0) stats.win_rate = static_cast<double>(stats.wins) / static_cast<double>(stats.cells);
  if (stats.losses > 0) stats.mean_yielded = yielded / static_cast<double>(stats.losses);
  return stats;
}

const char* to_string(RankAggregation a) {
  switch (a) {
    case RankAggregation::aggregated_utility: return "aggregated_utility";
    case RankAggregation::per_corruption: return "per_corruption";
    case RankAggregation::per_corruption_mean: return "per_corruption_mean";
  }
  return "aggregated_utility";
}

namespace {

std::optional<double> safe_spearman(const std::vector<std::string>& methods, const std::vector<double>& x,
                                    const std::vector<double>& y) {
  if (methods.size() < 2) return std::nullopt;
  try {
    return spearman(rank(methods, x), rank(methods, y));
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<RankCorrelation> offline_rank_correlation(const UtilityMatrix& matrix) {
  std::vector<RankCorrelation> out;
  const auto& methods = matrix.methods();
  const auto& corruptions = matrix.corruptions();
  for (std::size_t s = 0; s < matrix.scenarios().size(); ++s) {
    // Aggregate: methods with every corruption present in both columns.
    std::vector<std::string> agg_methods;
    std::vector<double> agg_u;
    std::vector<double> agg_off;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      double su = 0.0;
      double so = 0.0;
      bool complete = !corruptions.empty();
      for (std::size_t c = 0; c < corruptions.size() && complete; ++c) {
        const auto u = matrix.get(m, s, c);
        const auto o = matrix.offline(m, c);
        if (!u || !o) {
          complete = false;
          break;
        }
        su += *u;
        so += *o;
      }
      if (!complete) continue;
      agg_methods.push_back(methods[m]);
      agg_u.push_back(su / static_cast<double>(corruptions.size()));
      agg_off.push_back(so / static_cast<double>(corruptions.size()));
    }
    out.push_back({s, RankAggregation::aggregated_utility, "", safe_spearman(agg_methods, agg_off, agg_u)});

    double sum = 0.0;
    std::size_t defined = 0;
    for (std::size_t c = 0; c < corruptions.size(); ++c) {
      std::vector<std::string> ms;
      std::vector<double> us;
      std::vector<double> os;
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto u = matrix.get(m, s, c);
        const auto o = matrix.offline(m, c);
        if (!u || !o) continue;
        ms.push_back(methods[m]);
        us.push_back(*u);
        os.push_back(*o);
      }
      const auto r = safe_spearman(ms, os, us);
      out.push_back({s, RankAggregation::per_corruption, corruptions[c], r});
      if (r) {
        sum += *r;
        ++defined;
      }
    }
    std::optional<double> mean;
    if (defined > 0) mean = sum / static_cast<double>(defined);
    out.push_back({s, RankAggregation::per_corruption_mean, "", mean});
  }
  return out;
}

}  // namespace tempora
