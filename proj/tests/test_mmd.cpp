#include <gtest/gtest.h>

#include <random>

#include "genmetric/mmd.hpp"
#include "oracles.hpp"

using namespace genmetric;

TEST(Mmd, IdenticalMultisetsGiveZero) {
  const auto x = ActivationSet::from_rows({{0, 1}, {2, 3}, {4, 4}});
  const auto y = ActivationSet::from_rows({{4, 4}, {0, 1}, {2, 3}});
  EXPECT_LE(mmd(x, y).value, 1e-12);
}

TEST(Mmd, TwoPointClosedForm) {
  for (double h : {0.1, 1.0, 3.0}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const auto r = mmd(ActivationSet::from_rows({{0.0}}), ActivationSet::from_rows({{h}}), KernelConfig::rbf(sigma));
      EXPECT_NEAR(r.value, 2.0 * (1.0 - std::exp(-h * h / (2 * sigma * sigma))), 1e-14);
    }
  }
}

TEST(Mmd, MedianHeuristicRecorded) {
  // pooled 1-D points {0, 1, 3}: pairwise distances 1, 2, 3, median 2
  const auto r = mmd(ActivationSet::from_rows({{0.0}, {1.0}}), ActivationSet::from_rows({{3.0}}));
  EXPECT_EQ(std::get<std::string>(*r.find_param("bandwidth_mode")), "median-heuristic");
  EXPECT_DOUBLE_EQ(std::get<double>(*r.find_param("bandwidth")), 2.0);
}

TEST(Mmd, DegenerateBandwidthFallsBack) {
  const auto x = ActivationSet::from_rows({{1.0, 1.0}, {1.0, 1.0}});
  const auto r = mmd(x, x);
  EXPECT_DOUBLE_EQ(std::get<double>(*r.find_param("bandwidth")), 1.0);
  EXPECT_TRUE(r.has_warning("degenerate-bandwidth"));
  EXPECT_EQ(r.value, 0.0);
}

TEST(Mmd, Errors) {
  EXPECT_THROW(mmd(ActivationSet::from_rows({{0.0}}), ActivationSet::from_rows({{0.0, 1.0}})), DimError);
  EXPECT_THROW(mmd(ActivationSet::from_rows({{0.0}}), ActivationSet::from_rows({{0.0}, {1.0}}),
                   KernelConfig::rbf(1.0), MmdEstimator::unbiased),
               InsufficientSamples);
}

TEST(Mmd, MatchesDoubleSumOracle) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> nd(2, 8), dd(1, 4);
  std::uniform_real_distribution<double> sd(0.3, 3.0);
  for (int i = 0; i < 200; ++i) {
    const int d = dd(rng);
    const auto xr = oracle::random_rows(rng, nd(rng), d);
    const auto yr = oracle::random_rows(rng, nd(rng), d, 1.3);
    const double sigma = sd(rng);
    const auto x = ActivationSet::from_rows(xr), y = ActivationSet::from_rows(yr);
    const double b = mmd(x, y, KernelConfig::rbf(sigma)).value;
    const double u = mmd(x, y, KernelConfig::rbf(sigma), MmdEstimator::unbiased).value;
    EXPECT_NEAR(b, oracle::mmd2(xr, yr, sigma, false), 1e-10);
    EXPECT_NEAR(u, oracle::mmd2(xr, yr, sigma, true), 1e-10);
    EXPECT_GE(b, 0.0);
  }
}

TEST(Mmd, ThreeVersusThree) {
  std::mt19937_64 rng(42);
  const auto xr = oracle::random_rows(rng, 3, 2), yr = oracle::random_rows(rng, 3, 2);
  const auto r = mmd(ActivationSet::from_rows(xr), ActivationSet::from_rows(yr));
  const double sigma = std::get<double>(*r.find_param("bandwidth"));
  EXPECT_NEAR(r.value, oracle::mmd2(xr, yr, sigma, false), 1e-12);
}

TEST(Mmd, UnbiasedIsCenteredUnderNull) {
  std::mt19937_64 rng(43);
  const int reps = 200;
  std::vector<double> vals;
  for (int i = 0; i < reps; ++i) {
    const auto x = ActivationSet::from_rows(oracle::random_rows(rng, 30, 2));
    const auto y = ActivationSet::from_rows(oracle::random_rows(rng, 30, 2));
    vals.push_back(mmd(x, y, KernelConfig::rbf(1.0), MmdEstimator::unbiased).value);
  }
  const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / reps;
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (reps - 1)) / std::sqrt(static_cast<double>(reps));
  EXPECT_LE(std::abs(mean), 3.0 * se);
}
