#include <gtest/gtest.h>

#include <random>

#include "genmetric/monitor.hpp"
#include "oracles.hpp"

using namespace genmetric;

namespace {

MonitorState feed(const MonitorConfig& c, const std::vector<std::pair<std::int64_t, double>>& h) {
  MonitorState s;
  for (const auto& [e, v] : h) {
    s = monitor_update(std::move(s), c, e, v);
    if (s.stopped) break;
  }
  return s;
}

}  // namespace

TEST(Monitor, LargeChangeDoesNotQualify) {
  MonitorConfig c;
  c.epsilon = 1e-3;
  const auto s = feed(c, {{1, 100}, {2, 50}});
  EXPECT_FALSE(s.stopped);
  EXPECT_EQ(s.qualifying_streak, 0);
  EXPECT_EQ(s.history.size(), 2u);
}

TEST(Monitor, StopsOnSmallChange) {
  MonitorConfig c;
  c.epsilon = 1e-3;
  const auto s = feed(c, {{1, 100}, {2, 50}, {3, 49.9995}});
  EXPECT_TRUE(s.stopped);
  EXPECT_EQ(s.stop_epoch, 3);
  EXPECT_GE(s.qualifying_streak, c.patience);
}

TEST(Monitor, PatienceTwo) {
  MonitorConfig c;
  c.epsilon = 1e-3;
  c.patience = 2;
  auto s = feed(c, {{1, 100}, {2, 50}, {3, 49.9995}});
  EXPECT_FALSE(s.stopped);
  EXPECT_EQ(s.qualifying_streak, 1);
  s = monitor_update(std::move(s), c, 4, 49.9994);
  EXPECT_TRUE(s.stopped);
  EXPECT_EQ(s.stop_epoch, 4);
}

TEST(Monitor, NeverBeforeMinEpochs) {
  MonitorConfig c;
  c.min_epochs = 4;
  const auto s = feed(c, {{1, 10}, {2, 10}, {3, 10}, {4, 10}});
  EXPECT_EQ(s.stop_epoch, 4);
  // epoch 0 followed by 1: first difference exists but epoch < 2
  const auto s2 = feed(MonitorConfig{}, {{0, 5}, {1, 5}});
  EXPECT_FALSE(s2.stopped);
}

TEST(Monitor, Errors) {
  MonitorConfig c;
  auto s = feed(c, {{1, 10}, {2, 5}});
  EXPECT_THROW(monitor_update(s, c, 2, 1), SequenceError);
  EXPECT_THROW(monitor_update(s, c, 3, -1), ValidationError);
  EXPECT_THROW(monitor_update(s, c, 3, std::nan("")), ValidationError);
  s = monitor_update(std::move(s), c, 3, 5.1);
  ASSERT_TRUE(s.stopped);
  EXPECT_THROW(monitor_update(s, c, 4, 5), StateError);

  MonitorConfig bad;
  bad.epsilon = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = {};
  bad.min_epochs = 1;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = {};
  bad.patience = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Monitor, MatchesReplayOnRandomHistories) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> len(1, 30), pat(1, 4), minep(2, 5), step(1, 3);
  std::uniform_real_distribution<double> eps_d(0.05, 2.0), jump(-3.0, 3.0);
  std::bernoulli_distribution small(0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    MonitorConfig c;
    c.epsilon = eps_d(rng);
    c.patience = pat(rng);
    c.min_epochs = minep(rng);
    std::vector<std::pair<std::int64_t, double>> h;
    std::int64_t epoch = trial % 3;  // start at 0, 1 or 2
    double v = 50.0;
    for (int i = 0, n = len(rng); i < n; ++i) {
      h.emplace_back(epoch, v);
      epoch += step(rng);
      v = std::max(0.0, v + (small(rng) ? jump(rng) * c.epsilon * 0.3 : jump(rng) * 5));
    }
    const auto s = feed(c, h);
    const auto expect = oracle::replay_stop(h, c.epsilon, c.patience, c.min_epochs);
    ASSERT_EQ(s.stop_epoch, expect) << "trial " << trial;
    EXPECT_EQ(s.stopped, expect.has_value());
    if (s.stop_epoch) EXPECT_GE(*s.stop_epoch, 2);
  }
}
