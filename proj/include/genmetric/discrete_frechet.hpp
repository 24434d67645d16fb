#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "genmetric/errors.hpp"
#include "genmetric/metric_report.hpp"

namespace genmetric {

/// Polygonal curve: m >= 1 points in R^d, stored row-major.
class Curve {
 public:
  Curve(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw ValidationError("curve points need at least one coordinate");
    if (coords_.empty() || coords_.size() % dim_ != 0) throw ValidationError("curve needs at least one whole point");
    for (double c : coords_) {
      if (!std::isfinite(c)) throw ValidationError("curve has a non-finite coordinate");
    }
  }

  static Curve from_points(const std::vector<std::vector<double>>& pts) {
    if (pts.empty()) throw ValidationError("curve needs at least one point");
    std::vector<double> flat;
    for (const auto& p : pts) {
      if (p.size() != pts.front().size()) throw DimError("curve points differ in dimension");
      flat.insert(flat.end(), p.begin(), p.end());
    }
    return Curve(pts.front().size(), std::move(flat));
  }

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> coords() const noexcept { return coords_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

/// Discrete Frechet distance (Eiter-Mannila coupling DP), O(m k) time and O(k) memory.
inline MetricReport discrete_frechet(const Curve& a, const Curve& b) {
  if (a.dim() != b.dim()) {
    throw DimError("curve point dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const std::size_t m = a.size();
  const std::size_t k = b.size();
  std::vector<double> prev(k), cur(k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double d = euclidean(a.point(i), b.point(j));
      if (i == 0 && j == 0) {
        cur[j] = d;
      } else if (i == 0) {
        cur[j] = std::max(d, cur[j - 1]);
      } else if (j == 0) {
        cur[j] = std::max(d, prev[j]);
      } else {
        cur[j] = std::max(d, std::min({prev[j], cur[j - 1], prev[j - 1]}));
      }
    }
    std::swap(prev, cur);
  }

  MetricReport report;
  report.metric_name = "discrete_frechet";
  report.value = prev[k - 1];
  report.add_param("len_a", static_cast<std::int64_t>(m));
  report.add_param("len_b", static_cast<std::int64_t>(k));
  report.inputs_digest = Digest().reals(a.coords()).reals(b.coords()).hex();
  return report;
}

}  // namespace genmetric
