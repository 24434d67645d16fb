#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "genmetric/errors.hpp"

namespace genmetric {

struct AdamConfig {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const {
    if (!(alpha > 0.0)) throw ValidationError("Adam learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ValidationError("beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ValidationError("beta2 must lie in [0, 1)");
    if (!(eps > 0.0)) throw ValidationError("Adam eps must be positive");
  }
};

struct AdamState {
  std::vector<double> theta;
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;

  static AdamState fresh(std::vector<double> theta0) {
    const auto n = theta0.size();
    return {std::move(theta0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0};
  }
};

/// One Adam update. t is incremented before the bias corrections, and eps sits
/// outside the square root:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   theta <- theta - alpha * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
inline AdamState adam_step(AdamState state, std::span<const double> grad, const AdamConfig& config = {}) {
  config.validate();
  if (grad.size() != state.theta.size() || state.m.size() != state.theta.size() ||
      state.v.size() != state.theta.size()) {
    throw DimError("gradient and Adam state lengths differ");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalError("non-finite gradient");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double g = grad[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    state.theta[i] -= config.alpha * m_hat / (std::sqrt(v_hat) + config.eps);
  }
  return state;
}

}  // namespace genmetric
