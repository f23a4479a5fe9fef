#include "ipdp/batch_pdp.hpp"

#include "ipdp/ema.hpp"
#include "ipdp/error.hpp"

namespace ipdp {

Dataset::Dataset(SchemaPtr schema, Eigen::MatrixXd rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  if (!schema_) throw ConfigError("dataset needs a schema");
  if (rows_.rows() < 1) throw InvalidValueError("dataset is empty");
  if (rows_.cols() != schema_->size()) {
    throw SchemaMismatchError("dataset width does not match its schema");
  }
  if (!rows_.allFinite()) throw InvalidValueError("dataset has non-finite values");
}

Dataset Dataset::FromRecords(const std::vector<FeatureVector>& records) {
  if (records.empty()) throw InvalidValueError("dataset is empty");
  const SchemaPtr& schema = records.front().schema();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(records.size()), schema->size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!SameSchema(schema, records[i].schema())) {
      throw SchemaMismatchError("dataset rows use different schemas");
    }
    rows.row(static_cast<Eigen::Index>(i)) = records[i].values().transpose();
  }
  return Dataset(schema, std::move(rows));
}

FeatureVector Dataset::Row(Eigen::Index i) const {
  return FeatureVector(schema_, rows_.row(i).transpose());
}

Eigen::VectorXd IceCurve(const Model& model, const FeatureVector& x,
                         std::string_view feature, const Eigen::VectorXd& grid) {
  if (grid.size() == 0) throw ConfigError("grid is empty");
  const Eigen::Index index = x.schema()->IndexOf(feature);
  FeatureVector probe = x;
  Eigen::VectorXd curve(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    probe.Set(index, grid[k]);
    curve[k] = model.Predict(probe);
  }
  return curve;
}

Eigen::VectorXd BatchPdp(const Model& model, const Dataset& data,
                         std::string_view feature, const Eigen::VectorXd& grid) {
  if (grid.size() == 0) throw ConfigError("grid is empty");
  data.schema()->IndexOf(feature);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(grid.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    sum += IceCurve(model, data.Row(i), feature, grid);
  }
  return sum / static_cast<double>(data.size());
}

Eigen::VectorXd FeatureRangeGrid(const Dataset& data, std::string_view feature,
                                 Eigen::Index m) {
  const auto column = data.rows().col(data.schema()->IndexOf(feature));
  return EvalPoints(column.minCoeff(), column.maxCoeff(), m);
}

}  // namespace ipdp
