#include <gtest/gtest.h>

#include <random>

#include "genmetric/frechet_gaussian.hpp"
#include "oracles.hpp"

using namespace genmetric;

namespace {

GaussianSummary scalar(double mu, double var) {
  return GaussianSummary(Eigen::VectorXd::Constant(1, mu), Eigen::MatrixXd::Constant(1, 1, var), 100);
}

GaussianSummary gauss(const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov) { return {mu, cov, 100}; }

double fid(const GaussianSummary& a, const GaussianSummary& b) { return frechet_gaussian_distance(a, b).value; }

}  // namespace

TEST(Fid, IdenticalSummariesGiveZero) {
  std::mt19937_64 rng(1);
  const auto s = gauss(Eigen::VectorXd::Random(5), oracle::random_spd(rng, 5));
  EXPECT_LE(fid(s, s), 1e-8);
}

TEST(Fid, ScalarExample) { EXPECT_NEAR(fid(scalar(0, 1), scalar(1, 4)), 2.0, 1e-12); }

TEST(Fid, CommutingCovariances) {
  const auto a = gauss(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  const auto b = gauss(Eigen::VectorXd::Zero(2), 4.0 * Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(fid(a, b), 2.0, 1e-12);
}

TEST(Fid, ReportCarriesTerms) {
  const auto r = frechet_gaussian_distance(scalar(0, 1), scalar(2, 1));
  EXPECT_EQ(r.metric_name, "fid");
  EXPECT_NEAR(std::get<double>(*r.find_param("d2")), 4.0, 1e-12);
  EXPECT_NEAR(std::get<double>(*r.find_param("trace")), 0.0, 1e-12);
  EXPECT_EQ(std::get<std::int64_t>(*r.find_param("dim")), 1);
  EXPECT_FALSE(r.inputs_digest.empty());
}

TEST(Fid, DimensionMismatch) {
  EXPECT_THROW(fid(scalar(0, 1), gauss(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2))), DimError);
}

TEST(Fid, ScalarClosedFormProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mu(-10, 10), sd(0.01, 5);
  for (int i = 0; i < 200; ++i) {
    const double m1 = mu(rng), m2 = mu(rng), s1 = sd(rng), s2 = sd(rng);
    EXPECT_NEAR(fid(scalar(m1, s1 * s1), scalar(m2, s2 * s2)), oracle::fid_1d(m1, s1, m2, s2), 1e-9);
  }
}

TEST(Fid, TwoByTwoClosedForm) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Eigen::MatrixXd a = oracle::random_spd(rng, 2), b = oracle::random_spd(rng, 2);
    const Eigen::VectorXd m1 = Eigen::VectorXd::Random(2), m2 = Eigen::VectorXd::Random(2);
    const double am[2][2] = {{a(0, 0), a(0, 1)}, {a(1, 0), a(1, 1)}};
    const double bm[2][2] = {{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}};
    const double expect = oracle::fid_2d(m1.data(), am, m2.data(), bm);
    EXPECT_NEAR(fid(gauss(m1, a), gauss(m2, b)), expect, 1e-9 * std::max(1.0, expect));
  }
}

TEST(Fid, Symmetric) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dd(1, 32);
  for (int i = 0; i < 50; ++i) {
    const int d = dd(rng);
    const auto a = gauss(Eigen::VectorXd::Random(d), oracle::random_spd(rng, d));
    const auto b = gauss(Eigen::VectorXd::Random(d), oracle::random_spd(rng, d));
    const double ab = fid(a, b), ba = fid(b, a);
    EXPECT_LE(std::abs(ab - ba), 1e-8 * std::max(1.0, ab));
  }
}

TEST(Fid, RotationInvariance) {
  std::mt19937_64 rng(14);
  const auto xr = oracle::random_rows(rng, 500, 8);
  auto xg = oracle::random_rows(rng, 500, 8, 1.5);
  for (auto& r : xg) r[0] += 1.0;
  RowMatrix a(500, 8), b(500, 8);
  for (int i = 0; i < 500; ++i)
    for (int j = 0; j < 8; ++j) {
      a(i, j) = xr[i][j];
      b(i, j) = xg[i][j];
    }
  const double base = fid(summarize(ActivationSet::from_matrix(a)), summarize(ActivationSet::from_matrix(b)));
  for (int k = 0; k < 20; ++k) {
    const Eigen::MatrixXd q = oracle::random_orthogonal(rng, 8);
    const RowMatrix ra = a * q, rb = b * q;
    const double rot = fid(summarize(ActivationSet::from_matrix(ra)), summarize(ActivationSet::from_matrix(rb)));
    EXPECT_LE(std::abs(rot - base), 1e-6 * base);
  }
}

TEST(Fid, StrictlyIncreasingInMeanShift) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd cov = oracle::random_spd(rng, 6);
    const Eigen::VectorXd mu = Eigen::VectorXd::Random(6), v = Eigen::VectorXd::Random(6);
    double prev = -1.0;
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
      const double f = fid(gauss(mu, cov), gauss(mu + t * v, cov));
      EXPECT_GT(f, prev);
      prev = f;
    }
  }
}

TEST(Fid, SingularCovarianceGetsJitter) {
  // rank-one covariance in 3 dims
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
  c(0, 0) = 1.0;
  const auto s = gauss(Eigen::VectorXd::Zero(3), c);
  const auto r = frechet_gaussian_distance(s, s);
  EXPECT_LE(r.value, 1e-8);
  EXPECT_GT(std::get<double>(*r.find_param("jitter_real")), 0.0);
  EXPECT_TRUE(r.has_warning("jitter"));
}

TEST(Fid, FromSamplesWithFewerRowsThanDims) {
  std::mt19937_64 rng(16);
  const auto a = ActivationSet::from_rows(oracle::random_rows(rng, 5, 10));
  const auto b = ActivationSet::from_rows(oracle::random_rows(rng, 5, 10));
  const auto r = frechet_gaussian_distance(summarize(a), summarize(b));
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_GE(r.value, 0.0);
  EXPECT_TRUE(r.has_warning("real singular-covariance"));
}
