#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "genmetric/activation_set.hpp"
#include "genmetric/errors.hpp"
#include "genmetric/metric_report.hpp"

namespace genmetric {

namespace detail {

/// Symmetric PSD square root. Eigenvalues in (-1e-8 tr, 0) are clamped to 0;
/// anything more negative means the matrix is not PSD and yields nullopt.
inline std::optional<Eigen::VectorXd> clamped_eigenvalues(const Eigen::VectorXd& lambda,
                                                          double trace) {
  const double floor = -1e-8 * std::max(std::abs(trace), 0.0);
  Eigen::VectorXd out = lambda;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < 0.0) {
      if (out(i) < floor) return std::nullopt;
      out(i) = 0.0;
    }
  }
  return out;
}

struct FidTerms {
  double mean_term = 0.0;   // ||mu_r - mu_g||^2
  double trace_term = 0.0;  // Tr(S_r + S_g - 2 (S_r S_g)^{1/2})
  double jitter_real = 0.0;
  double jitter_gen = 0.0;
  std::vector<std::string> warnings;
};

inline double base_jitter(const Eigen::MatrixXd& cov, const Eigen::VectorXd& eigenvalues) {
  const double mean_diag = cov.trace() / static_cast<double>(cov.rows());
  if (eigenvalues.minCoeff() < 1e-10 * mean_diag) return 1e-6 * mean_diag;
  return 0.0;
}

inline std::optional<double> trace_sqrt_product(const Eigen::MatrixXd& cov_r,
                                                const Eigen::MatrixXd& cov_g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_r(cov_r);
  if (es_r.info() != Eigen::Success) return std::nullopt;
  const auto lambda_r = clamped_eigenvalues(es_r.eigenvalues(), cov_r.trace());
  if (!lambda_r) return std::nullopt;
  const Eigen::MatrixXd& v = es_r.eigenvectors();
  const Eigen::MatrixXd sqrt_r = v * lambda_r->cwiseSqrt().asDiagonal() * v.transpose();

  Eigen::MatrixXd m = sqrt_r * cov_g * sqrt_r;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(m, Eigen::EigenvaluesOnly);
  if (es_m.info() != Eigen::Success) return std::nullopt;
  const auto lambda_m = clamped_eigenvalues(es_m.eigenvalues(), m.trace());
  if (!lambda_m) return std::nullopt;
  return lambda_m->cwiseSqrt().sum();
}

inline constexpr int kJitterEscalations = 4;

inline FidTerms fid_terms(const GaussianSummary& real, const GaussianSummary& gen) {
  if (real.dim() != gen.dim()) {
    throw DimError("summary dimensions differ: " + std::to_string(real.dim()) + " vs " +
                   std::to_string(gen.dim()));
  }
  FidTerms terms;
  terms.mean_term = (real.mean - gen.mean).squaredNorm();

  const auto d = static_cast<double>(real.dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev_r(real.cov, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev_g(gen.cov, Eigen::EigenvaluesOnly);
  double jr = ev_r.info() == Eigen::Success ? base_jitter(real.cov, ev_r.eigenvalues())
                                            : 1e-6 * real.cov.trace() / d;
  double jg = ev_g.info() == Eigen::Success ? base_jitter(gen.cov, ev_g.eigenvalues())
                                            : 1e-6 * gen.cov.trace() / d;

  for (int attempt = 0; attempt < kJitterEscalations; ++attempt) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(real.cov.rows(), real.cov.cols());
    const Eigen::MatrixXd cov_r = real.cov + jr * id;
    const Eigen::MatrixXd cov_g = gen.cov + jg * id;
    if (const auto tr_sqrt = trace_sqrt_product(cov_r, cov_g)) {
      terms.trace_term = cov_r.trace() + cov_g.trace() - 2.0 * *tr_sqrt;
      terms.jitter_real = jr;
      terms.jitter_gen = jg;
      if (jr > 0.0) terms.warnings.push_back("jitter-real: added " + std::to_string(jr) + "*I");
      if (jg > 0.0) terms.warnings.push_back("jitter-gen: added " + std::to_string(jg) + "*I");
      return terms;
    }
    // Escalate: start both sides from the base level, then grow tenfold.
    jr = jr > 0.0 ? jr * 10.0 : 1e-6 * real.cov.trace() / d;
    jg = jg > 0.0 ? jg * 10.0 : 1e-6 * gen.cov.trace() / d;
  }
  throw NumericalError("matrix square root did not converge after jitter escalation");
}

}  // namespace detail

/// Frechet distance between two Gaussians:
///   ||mu_r - mu_g||^2 + Tr(S_r + S_g - 2 (S_r S_g)^{1/2})
///
/// The trace of the product root is taken as Tr((S_r^{1/2} S_g S_r^{1/2})^{1/2}),
/// which is symmetric and avoids complex eigenvalues. Near-singular covariances
/// get a small ridge (recorded in warnings). Results within a tiny negative
/// tolerance of zero are clamped to zero.
inline MetricReport frechet_gaussian_distance(const GaussianSummary& real, const GaussianSummary& gen) {
  auto terms = detail::fid_terms(real, gen);
  double value = terms.mean_term + terms.trace_term;
  const double tol = 1e-8 * std::max(1.0, real.cov.trace() + gen.cov.trace());
  if (value < 0.0) {
    if (value < -tol) {
      throw NumericalError("Frechet distance came out negative (" + std::to_string(value) + ")");
    }
    value = 0.0;
  }

  MetricReport report;
  report.metric_name = "fid";
  report.value = value;
  report.add_param("dim", static_cast<std::int64_t>(real.dim()));
  report.add_param("d2", terms.mean_term);
  report.add_param("trace", terms.trace_term);
  report.add_param("jitter_real", terms.jitter_real);
  report.add_param("jitter_gen", terms.jitter_gen);
  for (const auto& w : real.warnings) report.warnings.push_back("real " + w);
  for (const auto& w : gen.warnings) report.warnings.push_back("gen " + w);
  for (auto& w : terms.warnings) report.warnings.push_back(std::move(w));
  report.inputs_digest = Digest()
                             .reals({real.mean.data(), static_cast<std::size_t>(real.mean.size())})
                             .matrix(real.cov)
                             .reals({gen.mean.data(), static_cast<std::size_t>(gen.mean.size())})
                             .matrix(gen.cov)
                             .hex();
  return report;
}

}  // namespace genmetric
