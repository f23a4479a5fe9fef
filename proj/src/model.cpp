#include "ipdp/model.hpp"

#include <cmath>

#include "ipdp/error.hpp"

namespace ipdp {

Schema::Schema(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ConfigError("schema must contain at least one feature");
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw ConfigError("duplicate feature name '" + names_[i] + "'");
    }
  }
}

std::optional<Eigen::Index> Schema::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::Index Schema::IndexOf(std::string_view name) const {
  if (auto i = Find(name)) return *i;
  throw SchemaMismatchError("unknown feature '" + std::string(name) + "'");
}

bool SameSchema(const SchemaPtr& a, const SchemaPtr& b) {
  return a == b || (a && b && *a == *b);
}

FeatureVector::FeatureVector(SchemaPtr schema, Eigen::VectorXd values)
    : schema_(std::move(schema)), values_(std::move(values)) {
  if (!schema_) throw ConfigError("feature vector needs a schema");
  if (values_.size() != schema_->size()) {
    throw SchemaMismatchError("feature vector has " +
                              std::to_string(values_.size()) +
                              " values, schema has " +
                              std::to_string(schema_->size()));
  }
  if (!values_.allFinite()) {
    throw InvalidValueError("feature vector contains non-finite values");
  }
}

FeatureVector FeatureVector::FromPairs(
    const std::vector<std::pair<std::string, double>>& pairs) {
  std::vector<std::string> names;
  Eigen::VectorXd values(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    names.push_back(pairs[i].first);
    values[static_cast<Eigen::Index>(i)] = pairs[i].second;
  }
  return FeatureVector(Schema::Make(std::move(names)), std::move(values));
}

void FeatureVector::Set(Eigen::Index i, double v) {
  if (!std::isfinite(v)) throw InvalidValueError("non-finite feature value");
  values_[i] = v;
}

FeatureVector FeatureVector::With(Eigen::Index i, double v) const {
  FeatureVector copy = *this;
  copy.Set(i, v);
  return copy;
}

bool FeatureVector::operator==(const FeatureVector& other) const {
  return SameSchema(schema_, other.schema_) && values_ == other.values_;
}

StaticModel StaticModel::Constant(double c) {
  return StaticModel([c](const FeatureVector&) { return c; });
}

StaticModel StaticModel::Linear(SchemaPtr schema, Eigen::VectorXd weights,
                                double bias) {
  if (weights.size() != schema->size()) {
    throw ConfigError("linear model weights do not match the schema");
  }
  return StaticModel([schema = std::move(schema), w = std::move(weights),
                      bias](const FeatureVector& x) {
    if (!SameSchema(schema, x.schema())) {
      throw SchemaMismatchError("input schema differs from the model schema");
    }
    return w.dot(x.values()) + bias;
  });
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LinearSgdModel::LinearSgdModel(SchemaPtr schema, double learning_rate)
    : schema_(std::move(schema)), learning_rate_(learning_rate) {
  if (!schema_) throw ConfigError("model needs a schema");
  if (!(learning_rate_ > 0) || !std::isfinite(learning_rate_)) {
    throw ConfigError("learning rate must be positive and finite");
  }
  weights_ = Eigen::VectorXd::Zero(schema_->size());
}

void LinearSgdModel::SetParameters(Eigen::VectorXd weights, double bias) {
  if (weights.size() != schema_->size()) {
    throw ConfigError("weight vector does not match the schema");
  }
  weights_ = std::move(weights);
  bias_ = bias;
}

double LinearSgdModel::Margin(const FeatureVector& x) const {
  if (!SameSchema(schema_, x.schema())) {
    throw SchemaMismatchError("input schema differs from the model schema");
  }
  return weights_.dot(x.values()) + bias_;
}

void LinearSgdModel::Step(const FeatureVector& x, double residual) {
  weights_.noalias() -= learning_rate_ * residual * x.values();
  bias_ -= learning_rate_ * residual;
}

double SgdLogistic::Predict(const FeatureVector& x) const {
  return Sigmoid(Margin(x));
}

void SgdLogistic::LearnOne(const FeatureVector& x, double y) {
  if (y != 0.0 && y != 1.0) {
    throw InvalidValueError("logistic label must be 0 or 1, got " +
                            std::to_string(y));
  }
  Step(x, Predict(x) - y);
}

double SgdLinear::Predict(const FeatureVector& x) const { return Margin(x); }

void SgdLinear::LearnOne(const FeatureVector& x, double y) {
  if (!std::isfinite(y)) throw InvalidValueError("non-finite regression target");
  Step(x, Predict(x) - y);
}

}  // namespace ipdp
