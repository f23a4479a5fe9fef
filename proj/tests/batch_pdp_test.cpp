#include "ipdp/batch_pdp.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ipdp/error.hpp"

namespace ipdp {
namespace {

const SchemaPtr& Schema2() {
  static const SchemaPtr s = Schema::Make({"x1", "x2"});
  return s;
}

Dataset RandomData(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd rows(n, 2);
  for (int i = 0; i < n; ++i) rows.row(i) << normal(rng), normal(rng);
  return Dataset(Schema2(), rows);
}

double Curvy(const FeatureVector& x) { return std::tanh(x[0]) * x[1] + x[1] * x[1]; }

TEST(BatchPdpTest, IdentityModelReturnsGrid) {
  auto model = StaticModel::FromFunction([](const FeatureVector& x) { return x[0]; });
  const Dataset data = RandomData(50, 1);
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(11, -2.0, 3.0);
  EXPECT_TRUE(BatchPdp(model, data, "x1", grid).isApprox(grid, 1e-14));
}

TEST(BatchPdpTest, ProductAveragesOtherFeature) {
  auto model = StaticModel::FromFunction([](const FeatureVector& x) { return x[0] * x[1]; });
  Eigen::MatrixXd rows(4, 2);
  rows << 0, 1, 5, 3, -2, 1, 9, 3;
  const Dataset data(Schema2(), rows);
  const Eigen::VectorXd grid = Eigen::Vector3d(-1.0, 0.0, 2.5);
  EXPECT_TRUE(BatchPdp(model, data, "x1", grid).isApprox(2.0 * grid, 1e-14));
}

TEST(BatchPdpTest, AdditiveExample) {
  auto model = StaticModel::FromFunction([](const FeatureVector& x) { return x[0] + x[1]; });
  Eigen::MatrixXd rows(3, 2);
  rows << 0.3, 5, 0.9, 5, -4, 5;
  const Eigen::VectorXd pd = BatchPdp(model, Dataset(Schema2(), rows), "x1",
                                      Eigen::Vector2d(0.0, 1.0));
  EXPECT_DOUBLE_EQ(pd[0], 5.0);
  EXPECT_DOUBLE_EQ(pd[1], 6.0);
}

TEST(BatchPdpTest, ConstantModel) {
  auto model = StaticModel::Constant(4.25);
  const Eigen::VectorXd pd = BatchPdp(model, RandomData(30, 2), "x2",
                                      Eigen::VectorXd::LinSpaced(5, 0, 1));
  for (double v : pd) EXPECT_DOUBLE_EQ(v, 4.25);
}

TEST(BatchPdpTest, EqualsMeanOfIceCurves) {
  auto model = StaticModel::FromFunction(Curvy);
  const Dataset data = RandomData(200, 3);
  const Eigen::VectorXd grid = FeatureRangeGrid(data, "x1", 15);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(15);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const FeatureVector x = data.Row(i);
    const Eigen::VectorXd curve = IceCurve(model, x, "x1", grid);
    for (Eigen::Index k = 0; k < 15; ++k) {
      ASSERT_EQ(curve[k], Curvy(x.With(0, grid[k])));
    }
    mean += curve;
  }
  mean /= 200.0;
  EXPECT_LE((BatchPdp(model, data, "x1", grid) - mean).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BatchPdpTest, RowOrderDoesNotMatter) {
  auto model = StaticModel::FromFunction(Curvy);
  const Dataset data = RandomData(100, 4);
  std::vector<int> order(100);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(9));
  const Dataset shuffled(Schema2(), data.rows()(order, Eigen::all));
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(7, -1, 1);
  EXPECT_LE((BatchPdp(model, data, "x1", grid) - BatchPdp(model, shuffled, "x1", grid))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(BatchPdpTest, SubsampleConverges) {
  auto model = StaticModel::FromFunction(Curvy);
  const Dataset full = RandomData(20000, 5);
  const Dataset half(Schema2(), full.rows().topRows(10000));
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(5, -1, 1);
  // The x2 second moment dominates the spread; its std error is ~0.02.
  EXPECT_LE((BatchPdp(model, full, "x1", grid) - BatchPdp(model, half, "x1", grid))
                .cwiseAbs()
                .maxCoeff(),
            0.1);
}

TEST(BatchPdpTest, FeatureRangeGridSpansColumn) {
  Eigen::MatrixXd rows(3, 2);
  rows << 1, 0, -3, 0, 7, 0;
  const Eigen::VectorXd grid = FeatureRangeGrid(Dataset(Schema2(), rows), "x1", 5);
  EXPECT_EQ(grid, Eigen::VectorXd::LinSpaced(5, -3, 7));
}

TEST(BatchPdpTest, Errors) {
  auto model = StaticModel::Constant(0.0);
  EXPECT_THROW(Dataset(Schema2(), Eigen::MatrixXd(0, 2)), InvalidValueError);
  EXPECT_THROW(Dataset(Schema2(), Eigen::MatrixXd::Zero(2, 3)), SchemaMismatchError);
  EXPECT_THROW(Dataset::FromRecords({}), InvalidValueError);
  const Dataset data = RandomData(5, 6);
  EXPECT_THROW(BatchPdp(model, data, "x3", Eigen::Vector2d(0, 1)), SchemaMismatchError);
  EXPECT_THROW(BatchPdp(model, data, "x1", Eigen::VectorXd()), ConfigError);
}

}  // namespace
}  // namespace ipdp
