#ifndef IPDP_MODEL_HPP_
#define IPDP_MODEL_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ipdp {

// Ordered, duplicate-free list of feature names. Shared between all vectors of
// one stream so that schema checks are usually a pointer comparison.
class Schema {
 public:
  explicit Schema(std::vector<std::string> names);

  static std::shared_ptr<const Schema> Make(std::vector<std::string> names) {
    return std::make_shared<const Schema>(std::move(names));
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Eigen::Index i) const { return names_[i]; }

  std::optional<Eigen::Index> Find(std::string_view name) const;
  // Throws SchemaMismatchError for unknown names.
  Eigen::Index IndexOf(std::string_view name) const;

  bool operator==(const Schema& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

bool SameSchema(const SchemaPtr& a, const SchemaPtr& b);

// One observation's feature values, stored densely in schema order.
class FeatureVector {
 public:
  FeatureVector(SchemaPtr schema, Eigen::VectorXd values);

  // Convenience for tests and small examples: builds a fresh schema.
  static FeatureVector FromPairs(
      const std::vector<std::pair<std::string, double>>& pairs);

  const SchemaPtr& schema() const { return schema_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

  double operator[](Eigen::Index i) const { return values_[i]; }
  double operator[](std::string_view name) const {
    return values_[schema_->IndexOf(name)];
  }

  // Overwrites one coordinate. Throws InvalidValueError for non-finite v.
  void Set(Eigen::Index i, double v);
  FeatureVector With(Eigen::Index i, double v) const;

  bool operator==(const FeatureVector& other) const;

 private:
  SchemaPtr schema_;
  Eigen::VectorXd values_;
};

// One labelled observation of a stream. `t` is 1-based.
struct StreamRecord {
  FeatureVector x;
  double y = 0.0;
  std::int64_t t = 0;
};

// Black-box prediction contract. For classifiers, predict returns the
// probability of class 1.
class Model {
 public:
  virtual ~Model() = default;
  virtual double Predict(const FeatureVector& x) const = 0;
};

class IncrementalModel : public Model {
 public:
  // Consumes exactly one observation.
  virtual void LearnOne(const FeatureVector& x, double y) = 0;
};

// Frozen model backed by an arbitrary callable. LearnOne is a no-op.
class StaticModel final : public IncrementalModel {
 public:
  using Function = std::function<double(const FeatureVector&)>;

  explicit StaticModel(Function g) : g_(std::move(g)) {}

  static StaticModel FromFunction(Function g) { return StaticModel(std::move(g)); }
  static StaticModel Constant(double c);
  // f(x) = weights . x + bias over a fixed schema.
  static StaticModel Linear(SchemaPtr schema, Eigen::VectorXd weights,
                            double bias);

  double Predict(const FeatureVector& x) const override { return g_(x); }
  void LearnOne(const FeatureVector&, double) override {}

 private:
  Function g_;
};

// Shared state of the two SGD learners: a weight vector over a fixed schema
// and an intercept, updated with one gradient step per observation.
class LinearSgdModel : public IncrementalModel {
 public:
  static constexpr double kDefaultLearningRate = 0.01;

  LinearSgdModel(SchemaPtr schema, double learning_rate);

  const SchemaPtr& schema() const { return schema_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  double learning_rate() const { return learning_rate_; }

  void SetParameters(Eigen::VectorXd weights, double bias);

 protected:
  // w . x + b after checking that x uses this model's schema.
  double Margin(const FeatureVector& x) const;
  void Step(const FeatureVector& x, double residual);

 private:
  SchemaPtr schema_;
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
  double learning_rate_;
};

// Online logistic regression on log-loss; predicts P(y = 1 | x).
class SgdLogistic final : public LinearSgdModel {
 public:
  explicit SgdLogistic(SchemaPtr schema,
                       double learning_rate = kDefaultLearningRate)
      : LinearSgdModel(std::move(schema), learning_rate) {}

  double Predict(const FeatureVector& x) const override;
  // y must be 0 or 1.
  void LearnOne(const FeatureVector& x, double y) override;
};

// Online least-squares regression.
class SgdLinear final : public LinearSgdModel {
 public:
  explicit SgdLinear(SchemaPtr schema,
                     double learning_rate = kDefaultLearningRate)
      : LinearSgdModel(std::move(schema), learning_rate) {}

  double Predict(const FeatureVector& x) const override;
  void LearnOne(const FeatureVector& x, double y) override;
};

// Numerically stable logistic function.
double Sigmoid(double z);

}  // namespace ipdp

#endif  // IPDP_MODEL_HPP_
