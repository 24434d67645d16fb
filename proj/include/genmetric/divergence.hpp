#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genmetric/activation_set.hpp"
#include "genmetric/errors.hpp"
#include "genmetric/metric_report.hpp"

namespace genmetric {

/// Probability vector over a finite support.
class DiscreteDist {
 public:
  explicit DiscreteDist(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("distribution has empty support");
    double sum = 0.0;
    for (double p : probs_) {
      if (!std::isfinite(p) || p < 0.0) throw ValidationError("distribution entry is negative or non-finite");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("distribution sums to " + std::to_string(sum));
    }
  }

  std::size_t support_size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

namespace detail {

inline void check_same_support(const DiscreteDist& p, const DiscreteDist& q) {
  if (p.support_size() != q.support_size()) {
    throw DimError("support sizes differ: " + std::to_string(p.support_size()) + " vs " +
                   std::to_string(q.support_size()));
  }
}

/// sum p ln(p/q), 0 ln(0/q) = 0. Returns nullopt on p > 0, q = 0.
inline std::optional<double> kl_sum(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::nullopt;
    acc += p[i] * std::log(p[i] / q[i]);
  }
  return acc;
}

inline std::string dist_digest(const DiscreteDist& p, const DiscreteDist& q) {
  return Digest().reals(p.probs()).reals(q.probs()).hex();
}

}  // namespace detail

/// KL(P || Q) in nats. With smoothing, eps is added to every Q entry and Q is
/// renormalized before the sum.
inline MetricReport kl_divergence(const DiscreteDist& p, const DiscreteDist& q,
                                  std::optional<double> smoothing = std::nullopt) {
  detail::check_same_support(p, q);
  MetricReport report;
  report.metric_name = "kl";
  report.inputs_digest = detail::dist_digest(p, q);

  std::vector<double> qs(q.probs().begin(), q.probs().end());
  if (smoothing) {
    if (!(*smoothing > 0.0) || !std::isfinite(*smoothing)) {
      throw ValidationError("smoothing must be a positive finite number");
    }
    double sum = 0.0;
    for (double& v : qs) {
      v += *smoothing;
      sum += v;
    }
    for (double& v : qs) v /= sum;
    report.add_param("smoothing", *smoothing);
    report.warnings.push_back("smoothing-applied: eps=" + std::to_string(*smoothing));
  }
  const auto value = detail::kl_sum(p.probs(), qs);
  if (!value) throw InfiniteDivergence("P has mass where Q has none");
  // Gibbs: KL >= 0; rounding can leave a tiny negative.
  report.value = std::max(0.0, *value);
  return report;
}

/// Jensen-Shannon divergence, 0.5 KL(P||M) + 0.5 KL(Q||M) with M = (P+Q)/2.
inline MetricReport js_divergence(const DiscreteDist& p, const DiscreteDist& q) {
  detail::check_same_support(p, q);
  std::vector<double> m(p.support_size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  const double value = 0.5 * *detail::kl_sum(p.probs(), m) + 0.5 * *detail::kl_sum(q.probs(), m);

  MetricReport report;
  report.metric_name = "js";
  report.value = std::clamp(value, 0.0, std::log(2.0));
  report.inputs_digest = detail::dist_digest(p, q);
  return report;
}

inline constexpr double kProbabilityFloor = 1e-12;

/// exp(mean_n KL(p(y|x_n) || p(y))) with p(y) the row-mean marginal.
/// Probabilities are floored at 1e-12 inside the logarithms.
inline MetricReport inception_score(const ProbTable& table) {
  if (table.n_classes() < 2) throw ValidationError("inception score needs at least 2 classes");
  const std::size_t n = table.n_rows();
  const std::size_t c = table.n_classes();

  std::vector<double> marginal(c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = table.row(i);
    for (std::size_t j = 0; j < c; ++j) marginal[j] += r[j];
  }
  std::vector<double> log_marginal(c);
  for (std::size_t j = 0; j < c; ++j) {
    marginal[j] /= static_cast<double>(n);
    log_marginal[j] = std::log(std::max(marginal[j], kProbabilityFloor));
  }

  double mean_kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = table.row(i);
    double kl = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      if (r[j] == 0.0) continue;
      kl += r[j] * (std::log(std::max(r[j], kProbabilityFloor)) - log_marginal[j]);
    }
    mean_kl += kl;
  }
  mean_kl /= static_cast<double>(n);

  MetricReport report;
  report.metric_name = "inception_score";
  report.value = std::exp(mean_kl);
  report.add_param("n_samples", static_cast<std::int64_t>(n));
  report.add_param("n_classes", static_cast<std::int64_t>(c));
  report.add_param("mean_kl", mean_kl);
  report.inputs_digest = Digest().reals(table.values()).hex();
  return report;
}

}  // namespace genmetric
