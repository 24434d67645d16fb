#pragma once

// Diagonal-Gaussian stand-in for a trained generator, so the tuning and
// early-stopping loop can run end to end without a neural network.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "genmetric/activation_set.hpp"
#include "genmetric/adam.hpp"
#include "genmetric/errors.hpp"

namespace genmetric {

/// SplitMix64 evaluated in counter mode: output k for key s is the SplitMix64
/// finalizer applied to s + (k+1) * 0x9E3779B97F4A7C15.
struct CounterRng {
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t counter) noexcept {
    std::uint64_t z = seed + (counter + 1) * kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1]: top 53 bits, offset by one ulp.
  static double uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
    return static_cast<double>((bits(seed, counter) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal for slot `index`, Box-Muller on counters 2*index and 2*index+1.
  static double normal(std::uint64_t seed, std::uint64_t index) noexcept {
    const double u1 = uniform(seed, 2 * index);
    const double u2 = uniform(seed, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

inline constexpr double kMinSigma = 1e-12;

struct ToyGenerator {
  std::vector<double> mu;
  std::vector<double> log_sigma;
  std::uint64_t seed = 0;

  std::size_t dim() const noexcept { return mu.size(); }
  double sigma(std::size_t j) const { return std::max(std::exp(log_sigma[j]), kMinSigma); }

  void validate() const {
    if (mu.empty() || mu.size() != log_sigma.size()) throw ValidationError("toy generator shape is inconsistent");
    for (double v : mu) {
      if (!std::isfinite(v)) throw ValidationError("toy generator mean is not finite");
    }
    for (double v : log_sigma) {
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw ValidationError("toy generator log-sigma is not finite");
      }
    }
  }
};

/// n i.i.d. rows from N(mu, diag(sigma^2)); entry (i, j) uses normal slot i*d + j.
inline ActivationSet sample_toy(const ToyGenerator& gen, std::size_t n, std::uint64_t seed) {
  gen.validate();
  if (n < 1) throw ValidationError("sample count must be >= 1");
  const std::size_t d = gen.dim();
  std::vector<double> data(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      data[i * d + j] = gen.mu[j] + gen.sigma(j) * CounterRng::normal(seed, i * d + j);
    }
  }
  return ActivationSet(n, d, std::move(data), "toy", "generated");
}

/// Moment-matching trainer: L = ||mu - mu_data||^2 + ||exp(log_sigma) - sigma_data||^2,
/// minimized with full-batch analytic gradients through Adam.
class ToyTrainer {
 public:
  ToyTrainer(const ActivationSet& data, ToyGenerator init, AdamConfig config = {})
      : gen_(std::move(init)), config_(config) {
    if (data.n_samples() < 2) throw InsufficientSamples("toy fitting needs at least 2 samples");
    gen_.validate();
    if (gen_.dim() != data.dim()) throw DimError("toy generator and data dimensions differ");
    config_.validate();
    const auto s = summarize(data);
    target_mu_.assign(s.mean.data(), s.mean.data() + s.mean.size());
    target_sigma_.resize(data.dim());
    for (std::size_t j = 0; j < data.dim(); ++j) target_sigma_[j] = std::sqrt(s.cov(j, j));

    std::vector<double> theta(gen_.mu);
    theta.insert(theta.end(), gen_.log_sigma.begin(), gen_.log_sigma.end());
    adam_ = AdamState::fresh(std::move(theta));
  }

  double loss() const {
    double l = 0.0;
    for (std::size_t j = 0; j < gen_.dim(); ++j) {
      const double dm = gen_.mu[j] - target_mu_[j];
      const double ds = std::exp(gen_.log_sigma[j]) - target_sigma_[j];
      l += dm * dm + ds * ds;
    }
    return l;
  }

  std::vector<double> gradient() const {
    const std::size_t d = gen_.dim();
    std::vector<double> g(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
      const double s = std::exp(gen_.log_sigma[j]);
      g[j] = 2.0 * (gen_.mu[j] - target_mu_[j]);
      g[d + j] = 2.0 * (s - target_sigma_[j]) * s;
    }
    return g;
  }

  /// Runs `steps` updates; returns the loss after each one.
  std::vector<double> train(std::size_t steps) {
    std::vector<double> losses;
    losses.reserve(steps);
    const std::size_t d = gen_.dim();
    for (std::size_t s = 0; s < steps; ++s) {
      adam_ = adam_step(std::move(adam_), gradient(), config_);
      for (std::size_t j = 0; j < d; ++j) {
        gen_.mu[j] = adam_.theta[j];
        gen_.log_sigma[j] = std::max(adam_.theta[d + j], std::log(kMinSigma));
      }
      const double l = loss();
      if (!std::isfinite(l)) throw NumericalError("toy loss became non-finite");
      losses.push_back(l);
    }
    return losses;
  }

  const ToyGenerator& generator() const noexcept { return gen_; }
  const std::vector<double>& target_mean() const noexcept { return target_mu_; }
  const std::vector<double>& target_sigma() const noexcept { return target_sigma_; }

 private:
  ToyGenerator gen_;
  AdamConfig config_;
  AdamState adam_;
  std::vector<double> target_mu_;
  std::vector<double> target_sigma_;
};

struct ToyFit {
  ToyGenerator generator;
  std::vector<double> loss_history;
};

inline ToyFit fit_toy_generator(const ActivationSet& data, const ToyGenerator& init, std::size_t steps,
                                const AdamConfig& config = {}) {
  if (steps < 1) throw ValidationError("steps must be >= 1");
  ToyTrainer trainer(data, init, config);
  auto losses = trainer.train(steps);
  return {trainer.generator(), std::move(losses)};
}

/// Starts from mu = 0, sigma = 1; the seed is carried into the generator for sampling.
inline ToyFit fit_toy_generator(const ActivationSet& data, std::size_t steps, const AdamConfig& config,
                                std::uint64_t seed) {
  ToyGenerator init{std::vector<double>(data.dim(), 0.0), std::vector<double>(data.dim(), 0.0), seed};
  return fit_toy_generator(data, init, steps, config);
}

}  // namespace genmetric
