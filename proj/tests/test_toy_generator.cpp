#include <gtest/gtest.h>

#include "genmetric/pipeline.hpp"
#include "genmetric/toy_generator.hpp"
#include "oracles.hpp"

using namespace genmetric;

TEST(CounterRng, KnownSplitMix64Outputs) {
  // SplitMix64 seeded with 0: the first outputs of the reference sequence
  EXPECT_EQ(CounterRng::bits(0, 0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(CounterRng::bits(0, 1), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(CounterRng::bits(0, 2), 0x06C45D188009454FULL);
}

TEST(CounterRng, UniformRange) {
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const double u = CounterRng::uniform(42, k);
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(SampleToy, DeterministicPerSeed) {
  const ToyGenerator g{{1.0, -2.0, 0.5}, {0.0, std::log(2.0), -1.0}, 0};
  EXPECT_EQ(sample_toy(g, 50, 17), sample_toy(g, 50, 17));
  EXPECT_NE(sample_toy(g, 50, 17), sample_toy(g, 50, 18));
}

TEST(SampleToy, DegenerateSpread) {
  const double inf = std::numeric_limits<double>::infinity();
  const ToyGenerator g{{3.0, -4.0}, {-inf, -inf}, 0};
  const auto s = sample_toy(g, 100, 5);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_NEAR(s.at(i, 0), 3.0, 1e-10);
    EXPECT_NEAR(s.at(i, 1), -4.0, 1e-10);
  }
}

TEST(SampleToy, MeanWithinClt) {
  const ToyGenerator truth{{2.0, -1.0}, {std::log(1.5), std::log(0.5)}, 0};
  const auto data = sample_toy(truth, 4000, 1);
  const auto fit = fit_toy_generator(data, 2000, AdamConfig{0.05}, 2);
  const auto s = sample_toy(fit.generator, 10000, 3);
  const auto sum = summarize(s);
  for (std::size_t j = 0; j < 2; ++j) {
    const double sigma = fit.generator.sigma(j);
    EXPECT_LE(std::abs(sum.mean(j) - fit.generator.mu[j]), 4 * sigma / std::sqrt(10000.0));
  }
}

TEST(FitToy, LossDropsHundredfold) {
  const ToyGenerator truth{{1.0, -0.5}, {std::log(2.0), std::log(0.7)}, 0};
  const auto data = sample_toy(truth, 1000, 11);
  const ToyGenerator init{{0.0, 0.0}, {0.0, 0.0}, 0};
  ToyTrainer probe(data, init);
  const double initial = probe.loss();
  const auto fit = fit_toy_generator(data, init, 500, AdamConfig{0.05});
  ASSERT_EQ(fit.loss_history.size(), 500u);
  for (double l : fit.loss_history) ASSERT_TRUE(std::isfinite(l));
  EXPECT_LT(fit.loss_history.back(), 0.01 * initial);
}

TEST(FitToy, ZeroStepsRejected) {
  const auto data = sample_toy({{0.0}, {0.0}, 0}, 10, 1);
  EXPECT_THROW(fit_toy_generator(data, 0, AdamConfig{}, 1), ValidationError);
}

TEST(FitToy, StartingAtOptimumBarelyMoves) {
  const auto data = sample_toy({{1.0, 2.0}, {0.3, -0.2}, 0}, 500, 4);
  ToyTrainer probe(data, {{0.0, 0.0}, {0.0, 0.0}, 0});
  ToyGenerator init{probe.target_mean(), {}, 0};
  for (double s : probe.target_sigma()) init.log_sigma.push_back(std::log(s));
  const auto fit = fit_toy_generator(data, init, 10);
  EXPECT_LT(fit.loss_history.back(), 1e-20);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LT(std::abs(fit.generator.mu[j] - init.mu[j]), 1e-6);
    EXPECT_LT(std::abs(fit.generator.log_sigma[j] - init.log_sigma[j]), 1e-6);
  }
}

TEST(FitToy, ZeroVarianceTargetIsAllowed) {
  const auto data = ActivationSet::from_rows({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
  const auto fit = fit_toy_generator(data, 300, AdamConfig{0.05}, 1);
  for (double l : fit.loss_history) ASSERT_TRUE(std::isfinite(l));
  EXPECT_LT(fit.loss_history.back(), fit.loss_history.front());
}

TEST(ToyPipeline, ConvergesAndPassesGate) {
  for (double offset : {1.0, 3.0, 5.0}) {
    DemoConfig cfg;
    cfg.start_offset_sigmas = offset;
    const auto out = run_demo_toy(cfg);
    EXPECT_LT(out.final_lfid, out.initial_lfid) << offset;
    EXPECT_EQ(out.decision, GateDecision::pass) << offset;
  }
}

TEST(ToyPipeline, DeterministicAndWritesArtifacts) {
  const auto dir = oracle::temp_dir("demo");
  DemoConfig cfg;
  cfg.out_dir = dir;
  const auto a = run_demo_toy(cfg);
  cfg.out_dir.reset();
  const auto b = run_demo_toy(cfg);
  EXPECT_EQ(a.report.reports, b.report.reports);
  EXPECT_TRUE(a.report.monitor->state.stopped);
  EXPECT_LT(a.final_lfid, 0.2 * a.initial_lfid);
  EXPECT_TRUE(std::filesystem::exists(dir / "real.actb"));
  EXPECT_TRUE(std::filesystem::exists(dir / "gen_epoch_000.actb"));
  EXPECT_TRUE(std::filesystem::exists(dir / "lfid_curve.svg"));
  EXPECT_TRUE(std::filesystem::exists(dir / "lfid_curve.csv"));
  const auto real = load_activations(dir / "real.actb");
  EXPECT_EQ(real.source_tag(), "real");
  EXPECT_EQ(real.n_samples(), cfg.n_real);
}
