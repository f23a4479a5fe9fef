#include "ipdp/explainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ipdp/ema.hpp"
#include "ipdp/error.hpp"

namespace ipdp {

void PdpConfig::Validate() const {
  CheckSmoothing(alpha);
  if (grid_size < 2) throw ConfigError("grid size must be >= 2");
  if (const auto* q = std::get_if<QuantileRange>(&range)) {
    if (!(q->q_low >= 0.0 && q->q_low < q->q_high && q->q_high <= 1.0)) {
      throw ConfigError("quantile range needs 0 <= q_low < q_high <= 1");
    }
    if (q->capacity < 1) throw ConfigError("reservoir capacity must be >= 1");
    if (!(q->entrance_probability > 0.0 && q->entrance_probability <= 1.0)) {
      throw ConfigError("entrance probability must lie in (0, 1]");
    }
  } else if (std::get<MinMaxRange>(range).window < 1) {
    throw ConfigError("min/max window must be >= 1");
  }
}

namespace {

std::variant<FrequencyReservoir, RollingExtremes> MakeStore(
    const RangeStrategy& strategy, std::uint64_t seed) {
  if (const auto* q = std::get_if<QuantileRange>(&strategy)) {
    return FrequencyReservoir(q->capacity, q->entrance_probability, q->policy,
                              seed);
  }
  return RollingExtremes(std::get<MinMaxRange>(strategy).window);
}

}  // namespace

RangeTracker::RangeTracker(const RangeStrategy& strategy, std::uint64_t seed)
    : store_(MakeStore(strategy, seed)), strategy_(strategy) {}

std::size_t RangeTracker::QuantileWarmup(const QuantileRange& q) {
  // The small offset keeps e.g. 1 / (0.5 - 0.45) from rounding up to 21.
  const auto inverse_width =
      static_cast<std::size_t>(std::ceil(1.0 / (q.q_high - q.q_low) - 1e-9));
  return std::max<std::size_t>(10, inverse_width);
}

void RangeTracker::Update(double x) {
  if (auto* reservoir = std::get_if<FrequencyReservoir>(&store_)) {
    reservoir->Update(x);
    if (!ready_) {
      ready_ = reservoir->size() >=
               QuantileWarmup(std::get<QuantileRange>(strategy_));
    }
  } else {
    auto& extremes = std::get<RollingExtremes>(store_);
    extremes.Update(x);
    if (!ready_) ready_ = extremes.Max() > extremes.Min();
  }
}

std::pair<double, double> RangeTracker::Range() const {
  if (const auto* reservoir = std::get_if<FrequencyReservoir>(&store_)) {
    const auto& q = std::get<QuantileRange>(strategy_);
    const std::array<double, 2> qs = {q.q_low, q.q_high};
    const auto bounds = reservoir->Quantiles(qs);
    return {bounds[0], bounds[1]};
  }
  const auto& extremes = std::get<RollingExtremes>(store_);
  return {extremes.Min(), extremes.Max()};
}

std::size_t RangeTracker::state_size() const {
  return std::visit([](const auto& s) { return s.size(); }, store_);
}

IncrementalPdp::IncrementalPdp(std::string feature, PdpConfig config)
    : feature_(std::move(feature)),
      config_((config.Validate(), std::move(config))),
      range_(config_.range, config_.seed),
      raw_grid_(Eigen::VectorXd::Zero(config_.grid_size)),
      raw_estimates_(Eigen::VectorXd::Zero(config_.grid_size)),
      ice_(config_.grid_size) {}

Eigen::Index IncrementalPdp::FeatureIndex(const SchemaPtr& schema) {
  if (schema != cached_schema_) {
    cached_index_ = schema->IndexOf(feature_);
    cached_schema_ = schema;
  }
  return cached_index_;
}

std::optional<ExplanationFrame> IncrementalPdp::ExplainOne(
    const Model& model, const FeatureVector& x) {
  const Eigen::Index index = FeatureIndex(x.schema());
  const double observed = x[index];
  ++observations_;

  const bool emit = range_.ready();
  if (emit) {
    const auto [lo, hi] = range_.Range();
    const Eigen::VectorXd eval = EvalPoints(lo, hi, config_.grid_size);
    FeatureVector probe = x;
    for (Eigen::Index k = 0; k < config_.grid_size; ++k) {
      probe.Set(index, eval[k]);
      ice_[k] = model.Predict(probe);
    }
    EmaUpdateInPlace(raw_estimates_, ice_, config_.alpha);
    EmaUpdateInPlace(raw_grid_, eval, config_.alpha);
    ++step_;
    last_min_ = lo;
    last_max_ = hi;
  }
  range_.Update(observed);

  if (!emit) return std::nullopt;
  return Frame();
}

ExplanationFrame IncrementalPdp::Frame() const {
  const double factor = DebiasFactor(config_.alpha, step_);
  ExplanationFrame frame;
  frame.t = observations_;
  frame.feature = feature_;
  frame.grid = raw_grid_ / factor;
  frame.estimates = raw_estimates_ / factor;
  frame.importance = PdpImportance(frame.estimates);
  frame.eval_min = last_min_;
  frame.eval_max = last_max_;
  return frame;
}

std::size_t IncrementalPdp::state_size() const {
  return static_cast<std::size_t>(raw_grid_.size() + raw_estimates_.size()) +
         range_.state_size();
}

MultiExplainer::MultiExplainer(std::vector<std::string> features,
                               const PdpConfig& config) {
  if (features.empty()) throw ConfigError("no features to explain");
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (features[i] == features[j]) {
        throw ConfigError("feature '" + features[i] + "' configured twice");
      }
    }
  }
  explainers_.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    PdpConfig per_feature = config;
    per_feature.seed = config.seed + i;
    explainers_.emplace_back(std::move(features[i]), per_feature);
  }
}

std::vector<ExplanationFrame> MultiExplainer::Observe(const Model& model,
                                                      const FeatureVector& x) {
  ++observations_;
  std::vector<ExplanationFrame> frames;
  for (auto& explainer : explainers_) {
    if (auto frame = explainer.ExplainOne(model, x)) {
      frames.push_back(std::move(*frame));
    }
  }
  return frames;
}

const IncrementalPdp& MultiExplainer::explainer(std::string_view feature) const {
  for (const auto& e : explainers_) {
    if (e.feature() == feature) return e;
  }
  throw SchemaMismatchError("no explainer for feature '" + std::string(feature) +
                            "'");
}

}  // namespace ipdp
