#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "genmetric/errors.hpp"
#include "genmetric/metric_report.hpp"

namespace genmetric {

/// Weighted atoms on the real line. Weights are normalized on construction.
class WeightedSamples {
 public:
  WeightedSamples(std::vector<double> locations, std::vector<double> weights)
      : loc_(std::move(locations)), w_(std::move(weights)) {
    if (loc_.empty()) throw ValidationError("empty sample list");
    if (loc_.size() != w_.size()) throw ValidationError("locations and weights differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < loc_.size(); ++i) {
      if (!std::isfinite(loc_[i])) throw ValidationError("non-finite location");
      if (!std::isfinite(w_[i]) || w_[i] < 0.0) throw ValidationError("negative or non-finite weight");
      total += w_[i];
    }
    if (!(total > 0.0)) throw ValidationError("weights sum to zero");
    for (double& w : w_) w /= total;
  }

  /// Equal-weight empirical measure.
  static WeightedSamples uniform(std::span<const double> xs) {
    std::vector<double> loc(xs.begin(), xs.end());
    std::vector<double> w(loc.size(), 1.0);
    return WeightedSamples(std::move(loc), std::move(w));
  }

  std::span<const double> locations() const noexcept { return loc_; }
  std::span<const double> weights() const noexcept { return w_; }
  std::size_t size() const noexcept { return loc_.size(); }

 private:
  std::vector<double> loc_;
  std::vector<double> w_;
};

/// W1 = integral |F_x(t) - F_y(t)| dt over the merged support; exact for
/// piecewise-constant CDFs.
inline MetricReport wasserstein_1d(const WeightedSamples& x, const WeightedSamples& y) {
  struct Atom {
    double loc;
    double dx;  // signed mass: +x, -y
  };
  std::vector<Atom> atoms;
  atoms.reserve(x.size() + y.size());
  for (std::size_t i = 0; i < x.size(); ++i) atoms.push_back({x.locations()[i], x.weights()[i]});
  for (std::size_t i = 0; i < y.size(); ++i) atoms.push_back({y.locations()[i], -y.weights()[i]});
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.loc < b.loc; });

  // Track the two CDFs separately so the difference is not a long running
  // sum of cancelling terms.
  double fx = 0.0, fy = 0.0, total = 0.0;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    if (atoms[k].dx > 0.0) fx += atoms[k].dx; else fy -= atoms[k].dx;
    const double width = atoms[k + 1].loc - atoms[k].loc;
    if (width > 0.0) total += std::abs(fx - fy) * width;
  }

  MetricReport report;
  report.metric_name = "wasserstein_1d";
  report.value = total;
  report.add_param("n_x", static_cast<std::int64_t>(x.size()));
  report.add_param("n_y", static_cast<std::int64_t>(y.size()));
  report.inputs_digest = Digest()
                             .reals(x.locations()).reals(x.weights())
                             .reals(y.locations()).reals(y.weights())
                             .hex();
  return report;
}

inline MetricReport wasserstein_1d(std::span<const double> x, std::span<const double> y) {
  return wasserstein_1d(WeightedSamples::uniform(x), WeightedSamples::uniform(y));
}

}  // namespace genmetric
