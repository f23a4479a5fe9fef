#ifndef IPDP_BATCH_PDP_HPP_
#define IPDP_BATCH_PDP_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ipdp/model.hpp"

namespace ipdp {

// Fixed dataset: one row per observation, columns in schema order.
class Dataset {
 public:
  Dataset(SchemaPtr schema, Eigen::MatrixXd rows);
  static Dataset FromRecords(const std::vector<FeatureVector>& records);

  const SchemaPtr& schema() const { return schema_; }
  const Eigen::MatrixXd& rows() const { return rows_; }
  Eigen::Index size() const { return rows_.rows(); }
  FeatureVector Row(Eigen::Index i) const;

 private:
  SchemaPtr schema_;
  Eigen::MatrixXd rows_;
};

// Monte-Carlo partial dependence: for every grid value v, the mean model
// output over all rows with `feature` overwritten by v.
Eigen::VectorXd BatchPdp(const Model& model, const Dataset& data,
                         std::string_view feature, const Eigen::VectorXd& grid);

// Model outputs for one observation as `feature` sweeps the grid.
Eigen::VectorXd IceCurve(const Model& model, const FeatureVector& x,
                         std::string_view feature, const Eigen::VectorXd& grid);

// `m` equidistant points between the feature's minimum and maximum.
Eigen::VectorXd FeatureRangeGrid(const Dataset& data, std::string_view feature,
                                 Eigen::Index m = 20);

}  // namespace ipdp

#endif  // IPDP_BATCH_PDP_HPP_
