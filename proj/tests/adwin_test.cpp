#include "ipdp/adwin.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ipdp/error.hpp"

namespace ipdp {
namespace {

std::size_t BucketBound(std::int64_t n, int m) {
  return static_cast<std::size_t>(m) *
         (static_cast<std::size_t>(std::ceil(std::log2(std::max<std::int64_t>(n, 1)))) + 1);
}

TEST(AdwinTest, ConfigValidation) {
  EXPECT_THROW(Adwin(AdwinConfig{0.0}), ConfigError);
  EXPECT_THROW(Adwin(AdwinConfig{1.0}), ConfigError);
  EXPECT_THROW(Adwin(AdwinConfig{0.01, 0}), ConfigError);
  EXPECT_THROW(Adwin(AdwinConfig{0.01, 5, 0}), ConfigError);
  Adwin a;
  EXPECT_THROW(a.Update(std::nan("")), InvalidValueError);
}

TEST(AdwinTest, ConstantStreamNeverSignals) {
  for (double c : {0.0, 0.5, 123.0}) {
    Adwin a;
    for (int i = 0; i < 20000; ++i) ASSERT_FALSE(a.Update(c));
    EXPECT_EQ(a.width(), 20000);
    EXPECT_DOUBLE_EQ(a.mean(), c);
    EXPECT_EQ(a.variance(), 0.0);
  }
}

// Window statistics match the trailing inputs the window claims to hold, and
// the window is always a union of whole buckets.
TEST(AdwinTest, WindowIsBucketAlignedSuffix) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u;
  Adwin a;
  std::vector<double> seen;
  int cuts = 0;
  for (int i = 0; i < 6000; ++i) {
    const double v = u(rng) + (i >= 3000 ? 0.6 : 0.0);
    seen.push_back(v);
    const std::int64_t before = a.width();
    cuts += a.Update(v);
    const auto sizes = a.BucketSizes();
    ASSERT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0}), a.width());
    ASSERT_EQ(a.width(), before + 1 - a.last_dropped());
    for (std::size_t j = 1; j < sizes.size(); ++j) ASSERT_GE(sizes[j - 1], sizes[j]);
    ASSERT_LE(a.bucket_count(), BucketBound(a.width(), 5));

    const auto w = static_cast<std::size_t>(a.width());
    double mean = 0.0;
    for (std::size_t j = seen.size() - w; j < seen.size(); ++j) mean += seen[j];
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (std::size_t j = seen.size() - w; j < seen.size(); ++j) {
      var += (seen[j] - mean) * (seen[j] - mean);
    }
    var /= static_cast<double>(w);
    ASSERT_NEAR(a.mean(), mean, 1e-9);
    ASSERT_NEAR(a.variance(), var, 1e-9);
  }
  EXPECT_GE(cuts, 1);
}

TEST(AdwinTest, BucketBoundOnLongStream) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u;
  for (int m : {2, 5}) {
    Adwin a(AdwinConfig{0.002, m});
    for (int i = 0; i < 100000; ++i) {
      a.Update(u(rng));
      ASSERT_LE(a.bucket_count(), BucketBound(a.width(), m));
    }
  }
}

TEST(AdwinTest, DetectsBernoulliShift) {
  constexpr int kRuns = 100;
  int detected = 0;
  int mean_ok = 0;
  for (int r = 0; r < kRuns; ++r) {
    std::mt19937_64 rng(100 + r);
    Adwin a;
    for (int i = 0; i < 5000; ++i) a.Update(std::bernoulli_distribution(0.2)(rng) ? 1.0 : 0.0);
    bool hit = false;
    for (int i = 0; i < 500 && !hit; ++i) {
      hit = a.Update(std::bernoulli_distribution(0.8)(rng) ? 1.0 : 0.0);
    }
    if (!hit) continue;
    ++detected;
    // Keep feeding until the window has been emptied of old-concept data.
    for (int i = 0; i < 2000; ++i) a.Update(std::bernoulli_distribution(0.8)(rng) ? 1.0 : 0.0);
    if (std::abs(a.mean() - 0.8) <= 0.05) ++mean_ok;
  }
  EXPECT_GE(detected, 95);
  EXPECT_GE(mean_ok, detected - 5);
}

TEST(AdwinTest, FewFalseAlarmsOnStationaryUniform) {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u;
    Adwin a;
    for (int i = 0; i < 100000; ++i) a.Update(u(rng));
    EXPECT_LE(a.detections(), 5) << "seed " << seed;
  }
}

TEST(AdwinTest, HoeffdingVariantDetectsLargeShift) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u;
  AdwinConfig c;
  c.variance_aware = false;
  Adwin a(c);
  for (int i = 0; i < 3000; ++i) ASSERT_FALSE(a.Update(u(rng)));
  bool hit = false;
  for (int i = 0; i < 1000 && !hit; ++i) hit = a.Update(u(rng) + 1.0);
  EXPECT_TRUE(hit);
}

TEST(AdwinTest, CutThresholdShrinksWithSampleSize) {
  Adwin a;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 2000; ++i) a.Update(u(rng));
  EXPECT_GT(a.CutThreshold(10, 10), a.CutThreshold(100, 100));
  EXPECT_GT(a.CutThreshold(100, 100), a.CutThreshold(1000, 1000));
}

ExplanationFrame Frame(const std::string& feature, std::int64_t t, double importance) {
  ExplanationFrame f;
  f.t = t;
  f.feature = feature;
  f.importance = importance;
  f.grid = Eigen::Vector2d(0, 1);
  f.estimates = Eigen::Vector2d(0, importance);
  return f;
}

TEST(DriftMonitorTest, StepInImportanceYieldsOneEvent) {
  ExplanationDriftMonitor monitor;
  std::vector<DriftEvent> events;
  for (int t = 1; t <= 10000; ++t) {
    if (auto e = monitor.Observe(Frame("x1", t, t <= 5000 ? 0.0 : 1.0))) events.push_back(*e);
  }
  ASSERT_EQ(events.size(), 1u);
  EXPECT_GT(events[0].t, 5000);
  EXPECT_LE(events[0].t, 5100);
  EXPECT_EQ(events[0].feature, "x1");
  EXPECT_EQ(events[0].frame.t, events[0].t);
  EXPECT_EQ(events[0].frame.importance, 1.0);
}

TEST(DriftMonitorTest, FeaturesHaveIndependentDetectors) {
  ExplanationDriftMonitor monitor;
  std::vector<DriftEvent> events;
  for (int t = 1; t <= 6000; ++t) {
    if (auto e = monitor.Observe(Frame("a", t, 0.3))) events.push_back(*e);
    if (auto e = monitor.Observe(Frame("b", t, t <= 3000 ? 0.0 : 2.0))) events.push_back(*e);
  }
  EXPECT_EQ(monitor.feature_count(), 2u);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].feature, "b");
  EXPECT_EQ(monitor.detector("a").width(), 6000);
  EXPECT_LT(monitor.detector("b").width(), 6000);
  EXPECT_THROW(monitor.detector("c"), SchemaMismatchError);
}

TEST(DriftMonitorTest, RejectsOutOfOrderFrames) {
  ExplanationDriftMonitor monitor;
  monitor.Observe(Frame("x1", 5, 0.1));
  EXPECT_THROW(monitor.Observe(Frame("x1", 5, 0.1)), OrderingError);
  EXPECT_THROW(monitor.Observe(Frame("x1", 4, 0.1)), OrderingError);
  EXPECT_NO_THROW(monitor.Observe(Frame("x2", 1, 0.1)));
  EXPECT_NO_THROW(monitor.Observe(Frame("x1", 9, 0.1)));
}

}  // namespace
}  // namespace ipdp
