#ifndef IPDP_EXPLAINER_HPP_
#define IPDP_EXPLAINER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ipdp/model.hpp"
#include "ipdp/storage.hpp"

namespace ipdp {

// Evaluation range = [min, max] of the last `window` feature values.
struct MinMaxRange {
  std::int64_t window = 2000;
};

// Evaluation range = [Q(q_low), Q(q_high)] of a frequency reservoir.
struct QuantileRange {
  double q_low = 0.05;
  double q_high = 0.95;
  std::size_t capacity = 100;
  double entrance_probability = 0.05;
  VictimPolicy policy = VictimPolicy::kOldest;
};

using RangeStrategy = std::variant<QuantileRange, MinMaxRange>;

struct PdpConfig {
  double alpha = 0.001;
  Eigen::Index grid_size = 20;
  RangeStrategy range = QuantileRange{};
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void Validate() const;
};

// Tracks the recent value range of one feature and decides when enough
// values have been seen to place evaluation points. Readiness latches: a
// window that later collapses to a single value still yields a (degenerate)
// range.
class RangeTracker {
 public:
  RangeTracker(const RangeStrategy& strategy, std::uint64_t seed);

  void Update(double x);
  bool ready() const { return ready_; }
  // Current (min, max). Throws EmptyStoreError when nothing was stored.
  std::pair<double, double> Range() const;
  // Number of values currently held by the underlying sketch.
  std::size_t state_size() const;

  // Values the quantile strategy needs before it is ready.
  static std::size_t QuantileWarmup(const QuantileRange& q);

 private:
  std::variant<FrequencyReservoir, RollingExtremes> store_;
  RangeStrategy strategy_;
  bool ready_ = false;
};

// One debiased snapshot of a feature's incremental PD curve.
struct ExplanationFrame {
  std::int64_t t = 0;  // stream observation index, 1-based
  std::string feature;
  Eigen::VectorXd grid;
  Eigen::VectorXd estimates;
  double importance = 0.0;
  double eval_min = 0.0;
  double eval_max = 0.0;
};

// Incremental partial dependence for a single feature.
//
// Every observation contributes one ICE curve of the current model, evaluated
// at m equidistant points inside the feature's recent range. Grid points and
// PD estimates are both exponential moving averages started at zero; frames
// report them divided by 1 - (1 - alpha)^t, where t counts the averaged
// observations. The range store is updated with the observation only after
// the curve update, so a step never sees its own feature value in the range.
class IncrementalPdp {
 public:
  IncrementalPdp(std::string feature, PdpConfig config);

  // Returns nothing while the range tracker warms up; storage is still
  // updated in that case. Calls model.Predict exactly grid_size times when a
  // frame is produced and never otherwise.
  std::optional<ExplanationFrame> ExplainOne(const Model& model,
                                             const FeatureVector& x);

  // Debiased frame for the current state. Requires step() >= 1.
  ExplanationFrame Frame() const;

  const std::string& feature() const { return feature_; }
  const PdpConfig& config() const { return config_; }
  const Eigen::VectorXd& raw_grid() const { return raw_grid_; }
  const Eigen::VectorXd& raw_estimates() const { return raw_estimates_; }
  // Number of EMA updates performed.
  std::int64_t step() const { return step_; }
  // Number of observations seen, including warm-up.
  std::int64_t observations() const { return observations_; }
  const RangeTracker& range_tracker() const { return range_; }
  // Scalars held in memory: both curves plus the range sketch.
  std::size_t state_size() const;

 private:
  Eigen::Index FeatureIndex(const SchemaPtr& schema);

  std::string feature_;
  PdpConfig config_;
  RangeTracker range_;
  Eigen::VectorXd raw_grid_;
  Eigen::VectorXd raw_estimates_;
  Eigen::VectorXd ice_;
  std::int64_t step_ = 0;
  std::int64_t observations_ = 0;
  double last_min_ = 0.0;
  double last_max_ = 0.0;
  SchemaPtr cached_schema_;
  Eigen::Index cached_index_ = -1;
};

// Runs one IncrementalPdp per configured feature in lockstep.
class MultiExplainer {
 public:
  // Each feature's range sketch gets its own seed derived from config.seed.
  MultiExplainer(std::vector<std::string> features, const PdpConfig& config);

  // Frames in configured feature order; features still warming up are
  // absent.
  std::vector<ExplanationFrame> Observe(const Model& model,
                                        const FeatureVector& x);

  const std::vector<IncrementalPdp>& explainers() const { return explainers_; }
  const IncrementalPdp& explainer(std::string_view feature) const;
  std::int64_t observations() const { return observations_; }

 private:
  std::vector<IncrementalPdp> explainers_;
  std::int64_t observations_ = 0;
};

}  // namespace ipdp

#endif  // IPDP_EXPLAINER_HPP_
