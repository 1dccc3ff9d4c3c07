#include "tempora/synthetic.hpp"

#include "tempora/error.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace tempora {

namespace {

struct PresetRow {
  const char* name;
  const char* method;
  double mean_e_ms;
  double mean_ell_ms;
  bool gradient_based;
  FrozenBehaviour frozen;
  // Offline accuracy (%) per corruption in corruption_labels() order, then the mean.
  std::array<double, 16> accuracy_pct;
};

// Per-batch overhead means (lambda = 39.9 ms) and offline accuracies.
const std::array<PresetRow, 8> kPresets{{
    {"standard-table2", "Standard", 38.7, 0.0, false, FrozenBehaviour::retain,
     {3.00, 3.70, 2.64, 17.91, 9.73, 14.71, 22.46, 16.60, 23.06, 24.01, 59.13, 5.38, 16.51, 20.87, 32.64, 18.16}},
    {"adabn-table2", "AdaBN", 41.1, 0.0, false, FrozenBehaviour::retain,
     {16.15, 16.76, 16.67, 15.10, 15.44, 26.22, 38.90, 34.18, 33.11, 47.83, 65.33, 16.87, 44.18, 49.10, 39.99, 31.72}},
    {"lame-table2", "LAME", 40.3, 0.0, false, FrozenBehaviour::retain,
     {2.58, 3.20, 2.24, 17.63, 8.94, 13.89, 21.87, 15.23, 22.30, 22.23, 58.74, 5.15, 14.60, 20.30, 32.12, 17.40}},
    {"neo-table2", "NEO", 38.8, 0.0, false, FrozenBehaviour::retain,
     {5.23, 6.13, 5.18, 21.11, 12.60, 17.76, 26.57, 21.72, 27.67, 30.57, 60.27, 8.07, 24.93, 26.05, 38.26, 22.14}},
    {"tent-table2", "Tent", 41.1, 56.1, true, FrozenBehaviour::collapse,
     {29.98, 31.68, 31.27, 27.72, 26.86, 41.14, 49.26, 47.21, 41.15, 57.56, 67.47, 26.34, 54.63, 58.46, 52.47, 42.88}},
    {"eta-table2", "ETA", 41.1, 56.6, true, FrozenBehaviour::collapse,
     {36.01, 38.69, 38.18, 33.19, 33.19, 47.78, 52.74, 52.09, 45.99, 60.03, 67.85, 45.63, 57.74, 60.93, 55.22, 48.35}},
    {"shot-im-table2", "SHOT-IM", 41.1, 79.8, true, FrozenBehaviour::retain,
     {29.39, 32.00, 30.81, 27.31, 26.77, 43.20, 50.44, 49.11, 41.49, 57.84, 67.62, 13.15, 55.39, 59.08, 52.90, 42.43}},
    {"sar-table2", "SAR", 41.1, 154.1, true, FrozenBehaviour::collapse,
     {31.46, 31.40, 32.58, 29.10, 28.21, 41.70, 49.23, 47.23, 42.47, 57.64, 67.41, 38.26, 54.65, 58.37, 52.46, 44.14}},
}};

// Latency standard deviations: <1 ms for gradient-free, <4 ms for gradient-based.
constexpr Duration kSdForward{1'000'000};
constexpr Duration kSdBackward{4'000'000};

Duration draw_latency(std::mt19937_64& rng, Duration mean, Duration sd) {
  if (sd.count() == 0) return std::max(mean, Duration{0});
  std::normal_distribution<double> dist(static_cast<double>(mean.count()), static_cast<double>(sd.count()));
  for (;;) {
    const double v = dist(rng);
    if (v >= 0.0) return Duration{std::llround(v)};
  }
}

std::uint32_t draw_correct(std::mt19937_64& rng, std::uint32_t batch_size, double accuracy) {
  const double p = std::clamp(accuracy, 0.0, 1.0);
  std::binomial_distribution<std::uint32_t> dist(batch_size, p);
  return dist(rng);
}

}  // namespace

double AccuracyCurve::at(std::size_t index, std::size_t n) const {
  switch (shape) {
    case Shape::constant: return start;
    case Shape::linear_ramp: {
      if (n <= 1) return start;
      const double t = static_cast<double>(index - 1) / static_cast<double>(n - 1);
      return start + (end - start) * t;
    }
    case Shape::step: return index <= step_at ? start : end;
  }
  return start;
}

const std::vector<std::string>& corruption_labels() {
  static const std::vector<std::string> labels{
      "gaussian_noise", "shot_noise", "impulse_noise", "defocus_blur", "glass_blur",
      "motion_blur",    "zoom_blur",  "snow",          "frost",        "fog",
      "brightness",     "contrast",   "elastic_transform", "pixelate", "jpeg_compression"};
  return labels;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

SyntheticProfile preset(const std::string& name, const std::string& corruption) {
  auto it = std::find_if(kPresets.begin(), kPresets.end(), [&](const PresetRow& p) { return name == p.name; });
  if (it == kPresets.end()) {
    std::string available;
    for (const auto& n : preset_names()) available += (available.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "'; available presets: " + available);
  }
  std::size_t column = 15;
  if (corruption != "mean") {
    const auto& labels = corruption_labels();
    auto c = std::find(labels.begin(), labels.end(), corruption);
    if (c == labels.end()) throw ConfigError("unknown corruption '" + corruption + "' for preset " + name);
    column = static_cast<std::size_t>(c - labels.begin());
  }

  SyntheticProfile p;
  p.method = it->method;
  p.corruption = corruption;
  p.mean_e = round_millis(it->mean_e_ms);
  p.mean_ell = round_millis(it->mean_ell_ms);
  p.sd_e = kSdForward;
  p.sd_ell = it->gradient_based ? kSdBackward : Duration{0};
  p.accuracy.shape = AccuracyCurve::Shape::constant;
  p.accuracy.start = it->accuracy_pct[column] / 100.0;
  p.accuracy.end = p.accuracy.start;
  p.frozen = it->frozen;
  p.gradient_based = it->gradient_based;
  return p;
}

MethodTrace gen_synthetic(const SyntheticProfile& profile, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("gen_synthetic needs n > 0");
  if (profile.batch_size == 0) throw ConfigError("batch_size must be positive");
  std::mt19937_64 rng(seed);
  std::vector<BatchRecord> records;
  records.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    BatchRecord r;
    r.index = i;
    r.e = draw_latency(rng, profile.mean_e, profile.sd_e);
    r.ell = draw_latency(rng, profile.mean_ell, profile.sd_ell);
    r.batch_size = profile.batch_size;
    r.correct = draw_correct(rng, profile.batch_size, profile.accuracy.at(i, n));
    records.push_back(r);
  }
  return MethodTrace::make(profile.method, profile.lambda, profile.corruption, std::move(records));
}

FrozenRun gen_frozen_run(const SyntheticProfile& profile, const MethodTrace& adapted, std::size_t cutoff_m,
                         std::uint64_t seed) {
  const std::size_t n = adapted.size();
  if (cutoff_m > n) throw ConfigError("cutoff beyond stream length");
  std::seed_seq seq{seed, static_cast<std::uint64_t>(cutoff_m), std::uint64_t{0x66726f7a656eULL}};
  std::mt19937_64 rng(seq);
  std::vector<BatchRecord> records;
  records.reserve(n - cutoff_m);
  for (std::size_t i = cutoff_m + 1; i <= n; ++i) {
    BatchRecord r;
    r.index = i;
    r.e = draw_latency(rng, profile.mean_e, profile.sd_e);
    r.ell = Duration{0};
    r.batch_size = adapted.at(i).batch_size;
    const double a = profile.frozen == FrozenBehaviour::collapse ? profile.collapsed_accuracy
                                                                 : profile.accuracy.at(i, n);
    r.correct = draw_correct(rng, r.batch_size, a);
    records.push_back(r);
  }
  return FrozenRun::make(cutoff_m, n, std::move(records));
}

}  // namespace tempora
