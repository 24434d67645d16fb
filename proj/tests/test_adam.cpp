#include <gtest/gtest.h>

#include <random>

#include "genmetric/adam.hpp"
#include "oracles.hpp"

using namespace genmetric;

TEST(Adam, ZeroGradientIsFixedPoint) {
  const auto s = adam_step(AdamState::fresh({1.5, -2.0}), std::vector<double>{0.0, 0.0});
  EXPECT_EQ(s.theta, (std::vector<double>{1.5, -2.0}));
  EXPECT_EQ(s.m, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(s.v, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(s.t, 1);
}

TEST(Adam, FirstStepMagnitudeIsAlpha) {
  const AdamConfig c;
  for (double g : {1e-3, -1e-3, 0.5, -3.0, 1e4}) {
    const auto s = adam_step(AdamState::fresh({0.0}), std::vector<double>{g}, c);
    EXPECT_NEAR(std::abs(s.theta[0]), c.alpha, 1e-6) << g;
    EXPECT_EQ(std::signbit(s.theta[0]), !std::signbit(g));
  }
}

TEST(Adam, BiasCorrectionAfterOneStep) {
  const AdamConfig c;
  const double g = 0.37;
  const auto s = adam_step(AdamState::fresh({0.0}), std::vector<double>{g}, c);
  EXPECT_DOUBLE_EQ(s.m[0] / (1 - c.beta1), g);
  EXPECT_DOUBLE_EQ(s.v[0] / (1 - c.beta2), g * g);
}

TEST(Adam, MatchesLonghandRecurrence) {
  std::mt19937_64 rng(91);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> steps(0, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    AdamConfig c{0.001 + u(rng) * 0.1, 0.5 + 0.49 * u(rng), 0.9 + 0.0999 * u(rng), 1e-8};
    AdamState s{{n01(rng)}, {0.1 * n01(rng)}, {0.01 * u(rng)}, steps(rng)};
    const double g = n01(rng);
    const auto ref = oracle::adam_ref({s.theta[0], s.m[0], s.v[0]}, g, s.t + 1, c.alpha, c.beta1, c.beta2, c.eps);
    const auto out = adam_step(s, std::vector<double>{g}, c);
    EXPECT_NEAR(out.theta[0], ref.theta, 1e-12);
    EXPECT_NEAR(out.m[0], ref.m, 1e-12);
    EXPECT_NEAR(out.v[0], ref.v, 1e-12);
    EXPECT_EQ(out.t, s.t + 1);
  }
}

TEST(Adam, QuadraticRunDecreasesSteadily) {
  // f = theta^2 / 2, grad = theta
  AdamState s = AdamState::fresh({1.0});
  std::vector<double> trace{1.0};
  for (int i = 0; i < 100; ++i) {
    s = adam_step(std::move(s), std::vector<double>{s.theta[0]});
    trace.push_back(std::abs(s.theta[0]));
  }
  for (std::size_t w = 10; w < trace.size(); w += 10) EXPECT_LT(trace[w], trace[w - 10]);
  // with alpha = 0.001 each step moves roughly alpha, so 100 steps cover about 0.1
  EXPECT_NEAR(trace.back(), 0.9, 0.01);
}

TEST(Adam, Errors) {
  EXPECT_THROW(adam_step(AdamState::fresh({1.0}), std::vector<double>{1.0, 2.0}), DimError);
  EXPECT_THROW(adam_step(AdamState::fresh({1.0}), std::vector<double>{std::nan("")}), NumericalError);
  EXPECT_THROW(adam_step(AdamState::fresh({1.0}), std::vector<double>{1.0}, AdamConfig{0.0}), ValidationError);
  EXPECT_THROW(adam_step(AdamState::fresh({1.0}), std::vector<double>{1.0}, AdamConfig{0.1, 1.0}), ValidationError);
}
