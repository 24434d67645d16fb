#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "genmetric/activation_set.hpp"
#include "genmetric/errors.hpp"
#include "genmetric/metric_report.hpp"

namespace genmetric {

enum class KernelKind { rbf };
enum class MmdEstimator { biased, unbiased };

/// RBF kernel exp(-||x-y||^2 / (2 sigma^2)). An empty bandwidth selects the
/// median pairwise distance of the pooled sample.
struct KernelConfig {
  KernelKind kind = KernelKind::rbf;
  std::optional<double> bandwidth;

  static KernelConfig rbf(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("rbf bandwidth must be positive");
    return {KernelKind::rbf, sigma};
  }
  static KernelConfig median_heuristic() { return {KernelKind::rbf, std::nullopt}; }
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// Median of the pairwise Euclidean distances (i < j) over x and y pooled;
/// even counts average the two middle values. Returns 0 with fewer than two points.
inline double median_pairwise_distance(const ActivationSet& x, const ActivationSet& y) {
  std::vector<std::span<const double>> pts;
  for (std::size_t i = 0; i < x.n_samples(); ++i) pts.push_back(x.row(i));
  for (std::size_t i = 0; i < y.n_samples(); ++i) pts.push_back(y.row(i));
  std::vector<double> dist;
  dist.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) dist.push_back(std::sqrt(squared_distance(pts[i], pts[j])));
  if (dist.empty()) return 0.0;
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  const double upper = dist[mid];
  if (dist.size() % 2 == 1) return upper;
  const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// Sum of k(a_i, b_j); with exclude_diagonal the i == j terms are skipped.
inline double kernel_block_sum(const ActivationSet& a, const ActivationSet& b, double gamma,
                               bool exclude_diagonal) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.n_samples(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < b.n_samples(); ++j) {
      if (exclude_diagonal && i == j) continue;
      row += std::exp(-gamma * squared_distance(a.row(i), b.row(j)));
    }
    total += row;
  }
  return total;
}

}  // namespace detail

/// Squared MMD between two samples under an RBF kernel.
///
/// biased: mean k over all pairs (diagonals included) for both within-set
/// terms; unbiased: within-set terms exclude i == j.
inline MetricReport mmd(const ActivationSet& x, const ActivationSet& y,
                        const KernelConfig& kernel = KernelConfig::median_heuristic(),
                        MmdEstimator estimator = MmdEstimator::biased) {
  if (x.dim() != y.dim()) {
    throw DimError("sample dimensions differ: " + std::to_string(x.dim()) + " vs " + std::to_string(y.dim()));
  }
  const auto n = static_cast<double>(x.n_samples());
  const auto m = static_cast<double>(y.n_samples());
  if (estimator == MmdEstimator::unbiased && (x.n_samples() < 2 || y.n_samples() < 2)) {
    throw InsufficientSamples("unbiased MMD needs at least 2 samples per side");
  }

  MetricReport report;
  report.metric_name = "mmd";

  double sigma = 0.0;
  if (kernel.bandwidth) {
    sigma = *kernel.bandwidth;
    if (!(sigma > 0.0)) throw ValidationError("rbf bandwidth must be positive");
    report.add_param("bandwidth_mode", std::string("fixed"));
  } else {
    sigma = detail::median_pairwise_distance(x, y);
    report.add_param("bandwidth_mode", std::string("median-heuristic"));
    if (!(sigma > 0.0)) {
      sigma = 1.0;
      report.warnings.push_back("degenerate-bandwidth: all pairwise distances are zero, using 1");
    }
  }
  const double gamma = 1.0 / (2.0 * sigma * sigma);

  double value = 0.0;
  if (estimator == MmdEstimator::biased) {
    value = detail::kernel_block_sum(x, x, gamma, false) / (n * n) +
            detail::kernel_block_sum(y, y, gamma, false) / (m * m) -
            2.0 * detail::kernel_block_sum(x, y, gamma, false) / (n * m);
    // The biased estimate is a squared RKHS norm.
    value = std::max(0.0, value);
  } else {
    value = detail::kernel_block_sum(x, x, gamma, true) / (n * (n - 1.0)) +
            detail::kernel_block_sum(y, y, gamma, true) / (m * (m - 1.0)) -
            2.0 * detail::kernel_block_sum(x, y, gamma, false) / (n * m);
  }

  report.value = value;
  report.add_param("bandwidth", sigma);
  report.add_param("estimator", std::string(estimator == MmdEstimator::biased ? "biased" : "unbiased"));
  report.add_param("kernel", std::string("rbf"));
  report.inputs_digest = Digest().reals(x.values()).reals(y.values()).hex();
  return report;
}

}  // namespace genmetric
