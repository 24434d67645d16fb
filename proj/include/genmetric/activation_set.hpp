#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "genmetric/errors.hpp"

namespace genmetric {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N x D matrix of feature activations, one row per image.
///
/// Values are held as doubles; anything read from disk is exactly representable
/// as a 32-bit float. Immutable after construction.
class ActivationSet {
 public:
  ActivationSet(std::size_t n_samples, std::size_t dim, std::vector<double> data,
                std::string layer_tag = "unknown", std::string source_tag = "unknown")
      : n_(n_samples),
        d_(dim),
        data_(std::move(data)),
        layer_tag_(std::move(layer_tag)),
        source_tag_(std::move(source_tag)) {
    if (n_ == 0) throw ValidationError("activation set needs at least one sample");
    if (d_ == 0) throw ValidationError("activation set needs at least one dimension");
    if (data_.size() != n_ * d_) {
      throw ValidationError("data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(n_) + "x" + std::to_string(d_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < d_; ++j) {
        if (!std::isfinite(data_[i * d_ + j])) {
          throw DataError("non-finite activation at row " + std::to_string(i) + ", column " +
                          std::to_string(j));
        }
      }
    }
  }

  static ActivationSet from_rows(const std::vector<std::vector<double>>& rows,
                                 std::string layer_tag = "unknown",
                                 std::string source_tag = "unknown") {
    if (rows.empty()) throw ValidationError("activation set needs at least one sample");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw ValidationError("ragged rows in activation set");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return ActivationSet(rows.size(), d, std::move(flat), std::move(layer_tag),
                         std::move(source_tag));
  }

  static ActivationSet from_matrix(const RowMatrix& m, std::string layer_tag = "unknown",
                                   std::string source_tag = "unknown") {
    std::vector<double> flat(m.data(), m.data() + m.size());
    return ActivationSet(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                         std::move(flat), std::move(layer_tag), std::move(source_tag));
  }

  std::size_t n_samples() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  const std::string& layer_tag() const noexcept { return layer_tag_; }
  const std::string& source_tag() const noexcept { return source_tag_; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
  double at(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }

  Eigen::Map<const RowMatrix> matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(d_)};
  }

  /// Column subset in the given order.
  ActivationSet with_columns(std::span<const std::size_t> cols) const {
    if (cols.empty()) throw ValidationError("column selection is empty");
    std::vector<double> out;
    out.reserve(n_ * cols.size());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t c : cols) {
        if (c >= d_) throw DimError("column index " + std::to_string(c) + " out of range");
        out.push_back(data_[i * d_ + c]);
      }
    }
    return ActivationSet(n_, cols.size(), std::move(out), layer_tag_, source_tag_);
  }

  bool operator==(const ActivationSet&) const = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> data_;
  std::string layer_tag_;
  std::string source_tag_;
};

/// Mean and covariance of an activation set.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t n_samples = 0;
  std::vector<std::string> warnings;

  GaussianSummary(Eigen::VectorXd mu, Eigen::MatrixXd sigma, std::size_t n,
                  std::vector<std::string> warn = {})
      : mean(std::move(mu)), cov(std::move(sigma)), n_samples(n), warnings(std::move(warn)) {
    if (mean.size() == 0) throw ValidationError("summary has zero dimension");
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
      throw DimError("covariance side does not match mean length");
    }
    if (!mean.allFinite() || !cov.allFinite()) throw DataError("summary has non-finite entries");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
      if (cov(i, i) < 0.0) throw ValidationError("covariance diagonal is negative");
      for (Eigen::Index j = i + 1; j < cov.cols(); ++j) {
        if (std::abs(cov(i, j) - cov(j, i)) > 1e-9 * scale) {
          throw ValidationError("covariance is not symmetric");
        }
      }
    }
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Column means and unbiased (N-1) sample covariance.
inline GaussianSummary summarize(const ActivationSet& set) {
  const std::size_t n = set.n_samples();
  if (n < 2) throw InsufficientSamples("summarize needs at least 2 samples, got " + std::to_string(n));
  const auto x = set.matrix();
  Eigen::VectorXd mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = 0.5 * (cov + cov.transpose()).eval();

  std::vector<std::string> warnings;
  if (n <= set.dim()) {
    warnings.push_back("singular-covariance: N=" + std::to_string(n) + " <= D=" +
                       std::to_string(set.dim()));
  }
  return GaussianSummary(std::move(mean), std::move(cov), n, std::move(warnings));
}

/// Per-sample class probabilities p(y|x); rows are renormalized on construction.
class ProbTable {
 public:
  ProbTable(std::size_t n_rows, std::size_t n_classes, std::vector<double> probs)
      : n_(n_rows), c_(n_classes), probs_(std::move(probs)) {
    if (n_ == 0 || c_ == 0) throw ValidationError("probability table is empty");
    if (probs_.size() != n_ * c_) throw ValidationError("probability table shape mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < c_; ++j) {
        const double p = probs_[i * c_ + j];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          throw ValidationError("probability out of [0,1] at row " + std::to_string(i) +
                                ", column " + std::to_string(j));
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw ValidationError("row " + std::to_string(i) + " sums to " + std::to_string(sum));
      }
      for (std::size_t j = 0; j < c_; ++j) probs_[i * c_ + j] /= sum;
    }
  }

  static ProbTable from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("probability table is empty");
    const std::size_t c = rows.front().size();
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != c) throw ValidationError("ragged probability rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return ProbTable(rows.size(), c, std::move(flat));
  }

  std::size_t n_rows() const noexcept { return n_; }
  std::size_t n_classes() const noexcept { return c_; }
  std::span<const double> row(std::size_t i) const { return {probs_.data() + i * c_, c_}; }
  std::span<const double> values() const noexcept { return probs_; }

 private:
  std::size_t n_;
  std::size_t c_;
  std::vector<double> probs_;
};

}  // namespace genmetric
