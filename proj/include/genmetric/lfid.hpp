#pragma once

// Low-dimensional Frechet distance.
//
// Dimensionality comes down one of two ways: the extractor taps a shallow
// layer (64/192/768 features), or the engine keeps only the k columns with the
// highest variance on the real set. Either way the score is the Gaussian
// Frechet distance on what remains, and the quality gate flags scores above T.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "genmetric/activation_set.hpp"
#include "genmetric/errors.hpp"
#include "genmetric/frechet_gaussian.hpp"
#include "genmetric/metric_report.hpp"

namespace genmetric {

/// Per-column variances and the column order by descending variance.
struct FeatureRanking {
  std::vector<double> variances;
  std::vector<std::size_t> order;
  std::string computed_on;

  std::size_t dim() const noexcept { return variances.size(); }
};

enum class SelectionMode { all, top_k };

struct SelectionSpec {
  SelectionMode mode = SelectionMode::all;
  std::size_t k = 0;

  static SelectionSpec all() { return {SelectionMode::all, 0}; }
  static SelectionSpec top_k(std::size_t k) {
    if (k < 1) throw ValidationError("top_k needs k >= 1");
    return {SelectionMode::top_k, k};
  }
};

inline constexpr double kDefaultGateThreshold = 20.0;

struct GateConfig {
  double threshold = kDefaultGateThreshold;

  static GateConfig with_threshold(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("gate threshold must be positive");
    return {t};
  }
};

enum class GateDecision { pass, adjust };

inline const char* to_string(GateDecision d) { return d == GateDecision::pass ? "pass" : "adjust"; }

/// Sample variance (divisor N-1) of each column, ranked high to low; ties keep
/// the lower column index first.
inline FeatureRanking rank_features(const ActivationSet& set) {
  const std::size_t n = set.n_samples();
  const std::size_t d = set.dim();
  if (n < 2) throw InsufficientSamples("ranking needs at least 2 samples, got " + std::to_string(n));

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = set.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = set.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = r[j] - mean[j];
      var[j] += c * c;
    }
  }
  for (double& v : var) v /= static_cast<double>(n - 1);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return var[a] > var[b]; });
  return {std::move(var), std::move(order), set.source_tag()};
}

inline ActivationSet select_dims(const ActivationSet& set, const FeatureRanking& ranking,
                                 const SelectionSpec& spec) {
  if (ranking.dim() != set.dim()) {
    throw DimError("ranking covers " + std::to_string(ranking.dim()) + " columns, set has " +
                   std::to_string(set.dim()));
  }
  if (spec.mode == SelectionMode::all) return set;
  if (spec.k < 1 || spec.k > set.dim()) {
    throw ValidationError("k=" + std::to_string(spec.k) + " outside [1, " + std::to_string(set.dim()) + "]");
  }
  return set.with_columns(std::span<const std::size_t>(ranking.order.data(), spec.k));
}

/// Frechet distance on the selected columns. The ranking is taken from the
/// real set and the same columns are applied to the generated set.
inline MetricReport lfid_score(const ActivationSet& real, const ActivationSet& gen,
                               const SelectionSpec& spec = SelectionSpec::all()) {
  if (real.dim() != gen.dim()) {
    throw DimError("activation dimensions differ: " + std::to_string(real.dim()) + " vs " +
                   std::to_string(gen.dim()));
  }
  if (real.n_samples() < 2 || gen.n_samples() < 2) {
    throw InsufficientSamples("LFID needs at least 2 samples per side");
  }

  std::vector<std::int64_t> selected;
  MetricReport report;
  if (spec.mode == SelectionMode::all) {
    report = frechet_gaussian_distance(summarize(real), summarize(gen));
    selected.resize(real.dim());
    std::iota(selected.begin(), selected.end(), std::int64_t{0});
  } else {
    const auto ranking = rank_features(real);
    const auto r = select_dims(real, ranking, spec);
    const auto g = select_dims(gen, ranking, spec);
    report = frechet_gaussian_distance(summarize(r), summarize(g));
    selected.assign(ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(spec.k));
  }

  report.metric_name = "lfid";
  report.add_param("mode", std::string(spec.mode == SelectionMode::all ? "all" : "top_k"));
  report.add_param("k", static_cast<std::int64_t>(selected.size()));
  report.add_param("selected_columns", std::move(selected));
  report.add_param("layer_tag", real.layer_tag());
  report.inputs_digest = Digest().reals(real.values()).reals(gen.values()).hex();
  return report;
}

/// "adjust" iff value > T; the boundary passes.
inline GateDecision quality_gate(double lfid_value, const GateConfig& gate = {}) {
  if (std::isnan(lfid_value)) throw ValidationError("quality gate got NaN");
  return lfid_value > gate.threshold ? GateDecision::adjust : GateDecision::pass;
}

}  // namespace genmetric
