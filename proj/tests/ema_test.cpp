#include "ipdp/ema.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace ipdp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Direct weighted sum alpha * sum_s (1 - alpha)^(t - s) * v_s, s = 1..t.
double DirectSum(const std::vector<double>& v, double alpha) {
  const auto t = static_cast<int>(v.size());
  double acc = 0.0;
  for (int s = 1; s <= t; ++s) acc += std::pow(1.0 - alpha, t - s) * v[s - 1];
  return alpha * acc;
}

TEST(EvalPointsTest, Examples) {
  EXPECT_EQ(EvalPoints(0.0, 1.0, 2), Eigen::Vector2d(0.0, 1.0));
  Eigen::VectorXd five(5);
  five << 0.0, 2.5, 5.0, 7.5, 10.0;
  EXPECT_EQ(EvalPoints(0.0, 10.0, 5), five);
  EXPECT_EQ(EvalPoints(3.0, 3.0, 4), Eigen::VectorXd::Constant(4, 3.0));
}

TEST(EvalPointsTest, EndpointsExactAndMonotone) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    const auto m = std::uniform_int_distribution<Eigen::Index>(2, 50)(rng);
    const Eigen::VectorXd p = EvalPoints(lo, hi, m);
    ASSERT_EQ(p[0], lo);
    ASSERT_EQ(p[m - 1], hi);
    for (Eigen::Index k = 1; k < m; ++k) ASSERT_LE(p[k - 1], p[k]);
  }
}

TEST(EvalPointsTest, Errors) {
  EXPECT_THROW(EvalPoints(0.0, 1.0, 1), ConfigError);
  EXPECT_THROW(EvalPoints(0.0, kInf, 3), InvalidValueError);
  EXPECT_THROW(EvalPoints(kNaN, 1.0, 3), InvalidValueError);
  EXPECT_THROW(EvalPoints(2.0, 1.0, 3), InvalidValueError);
}

TEST(UpdateEstimateTest, Examples) {
  EXPECT_DOUBLE_EQ(UpdateEstimate(0.0, 1.0, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(UpdateEstimate(0.5, 1.5, 0.5), 1.0);
  double est = 0.0;
  for (int t = 0; t < 3; ++t) est = UpdateEstimate(est, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(est, 1.75);
  EXPECT_DOUBLE_EQ(est, (1.0 - std::pow(0.5, 3)) * 2.0);
}

TEST(UpdateEstimateTest, Errors) {
  EXPECT_THROW(UpdateEstimate(0.0, kNaN, 0.5), InvalidValueError);
  EXPECT_THROW(UpdateEstimate(kInf, 1.0, 0.5), InvalidValueError);
  EXPECT_THROW(UpdateEstimate(0.0, 1.0, 0.0), ConfigError);
  EXPECT_THROW(UpdateEstimate(0.0, 1.0, 1.0), ConfigError);
}

TEST(UpdateGridPointTest, Examples) {
  EXPECT_NEAR(UpdateGridPoint(0.0, 10.0, 0.001), 0.01, 1e-15);
  for (double alpha : {0.001, 0.05, 0.5, 0.9}) {
    double g = 0.0;
    for (int t = 1; t <= 37; ++t) {
      g = UpdateGridPoint(g, 4.2, alpha);
      EXPECT_NEAR(Debias(g, alpha, t), 4.2, 1e-12);
    }
  }
}

TEST(UpdateGridPointTest, RecursionMatchesExplicitSum) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal(3.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = std::uniform_real_distribution<double>(0.001, 0.9)(rng);
    std::vector<double> v;
    double g = 0.0;
    for (int t = 1; t <= 200; ++t) {
      v.push_back(normal(rng));
      g = UpdateGridPoint(g, v.back(), alpha);
    }
    EXPECT_NEAR(g, DirectSum(v, alpha), 1e-10);
  }
}

TEST(DebiasTest, Examples) {
  EXPECT_NEAR(Debias(0.001, 0.001, 1), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(Debias(0.75, 0.5, 2), 1.0);
  for (double alpha : {0.01, 0.3, 0.77}) {
    for (std::int64_t t : {1, 2, 10, 500}) {
      const double c = -2.5;
      EXPECT_NEAR(Debias(c * (1 - std::pow(1 - alpha, t)), alpha, t), c, 1e-12);
    }
  }
  EXPECT_THROW(Debias(1.0, 0.5, 0), InvalidValueError);
}

TEST(EmaUpdateInPlaceTest, OneHotRecencyWeights) {
  // A single unit input at step s leaves weight alpha (1 - alpha)^(t - s).
  const double alpha = 0.2;
  const int t_end = 12;
  for (int s = 1; s <= t_end; ++s) {
    Eigen::VectorXd state = Eigen::VectorXd::Zero(3);
    for (int t = 1; t <= t_end; ++t) {
      const double v = t == s ? 1.0 : 0.0;
      EmaUpdateInPlace(state, Eigen::VectorXd::Constant(3, v), alpha);
    }
    EXPECT_NEAR(state[1], alpha * std::pow(1 - alpha, t_end - s), 1e-12);
  }
}

TEST(EmaUpdateInPlaceTest, RejectsNonFinite) {
  Eigen::VectorXd state = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(EmaUpdateInPlace(state, Eigen::Vector2d(1.0, kNaN), 0.5),
               InvalidValueError);
  EXPECT_EQ(state, Eigen::VectorXd::Zero(2));
}

TEST(PdpImportanceTest, Examples) {
  EXPECT_EQ(PdpImportance(Eigen::VectorXd::Constant(7, 3.3)), 0.0);
  EXPECT_DOUBLE_EQ(PdpImportance(Eigen::Vector3d(0, 1, 2)), 1.0);
  // sqrt(5/3)
  EXPECT_NEAR(PdpImportance(Eigen::Vector4d(1, 2, 3, 4)), 1.290994, 1e-6);
  EXPECT_THROW(PdpImportance(Eigen::VectorXd::Zero(1)), ConfigError);
}

TEST(ScalarTemplateTest, FloatInstantiation) {
  const Eigen::VectorXf p = EvalPoints(0.0f, 1.0f, 3);
  EXPECT_FLOAT_EQ(p[1], 0.5f);
  EXPECT_FLOAT_EQ(Debias(0.75f, 0.5f, 2), 1.0f);
  EXPECT_FLOAT_EQ(PdpImportance(Eigen::Vector3f(0, 1, 2)), 1.0f);
}

}  // namespace
}  // namespace ipdp
