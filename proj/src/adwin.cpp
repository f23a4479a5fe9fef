#include "ipdp/adwin.hpp"

#include <cmath>

#include "ipdp/error.hpp"

namespace ipdp {

void AdwinConfig::Validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("ADWIN delta must lie in (0, 1)");
  if (max_buckets < 1) throw ConfigError("ADWIN needs at least one bucket per level");
  if (min_sub_window < 1) throw ConfigError("ADWIN minimum sub-window must be >= 1");
  if (clock < 1) throw ConfigError("ADWIN clock must be >= 1");
}

Adwin::Adwin(AdwinConfig config) : config_(config) {
  config_.Validate();
  levels_.emplace_back();
}

bool Adwin::Update(double value) {
  if (!std::isfinite(value)) throw InvalidValueError("non-finite value fed to ADWIN");
  last_dropped_ = 0;
  Insert(value);
  Compress();
  const bool drift = ++ticks_ % config_.clock == 0 && DetectAndCut();
  if (drift) ++detections_;
  return drift;
}

void Adwin::Insert(double value) {
  ++width_;
  if (width_ > 1) {
    const double prev_mean = sum_ / static_cast<double>(width_ - 1);
    const double d = value - prev_mean;
    m2_ += static_cast<double>(width_ - 1) * d * d / static_cast<double>(width_);
  }
  sum_ += value;
  levels_[0].push_back({value, 0.0});
}

void Adwin::Compress() {
  const auto limit = static_cast<std::size_t>(config_.max_buckets);
  for (std::size_t level = 0; level < levels_.size(); ++level) {
    auto& row = levels_[level];
    if (row.size() <= limit) break;
    const double n = std::ldexp(1.0, static_cast<int>(level));
    const Bucket a = row[0];
    const Bucket b = row[1];
    row.pop_front();
    row.pop_front();
    const double gap = a.sum / n - b.sum / n;
    const Bucket merged{a.sum + b.sum, a.m2 + b.m2 + n * n * gap * gap / (2.0 * n)};
    if (level + 1 == levels_.size()) levels_.emplace_back();
    levels_[level + 1].push_back(merged);
  }
}

double Adwin::CutThreshold(double n0, double n1) const {
  const double n = static_cast<double>(width_);
  if (!config_.variance_aware) {
    return std::sqrt(0.5 * (1.0 / n0 + 1.0 / n1) * std::log(4.0 * n / config_.delta));
  }
  const double offset = static_cast<double>(config_.min_sub_window) - 1.0;
  const double m_inv = 1.0 / (n0 - offset) + 1.0 / (n1 - offset);
  const double delta_prime = std::log(2.0 * std::log(n) / config_.delta);
  return std::sqrt(2.0 * m_inv * variance() * delta_prime) +
         2.0 / 3.0 * delta_prime * m_inv;
}

bool Adwin::DetectAndCut() {
  const auto min_len = static_cast<std::int64_t>(config_.min_sub_window);
  bool cut = false;
  while (width_ >= 2 * min_len) {
    // Walk buckets oldest to newest; the newest bucket always stays in W1.
    // The cut goes at the newest boundary that shows a change.
    std::int64_t n0 = 0;
    double s0 = 0.0;
    std::int64_t keep = 0;
    const std::size_t total = bucket_count();
    std::size_t seen = 0;
    for (std::size_t level = levels_.size(); level-- > 0;) {
      const std::int64_t size = std::int64_t{1} << level;
      for (const Bucket& bucket : levels_[level]) {
        if (++seen == total) break;
        n0 += size;
        s0 += bucket.sum;
        const std::int64_t n1 = width_ - n0;
        if (n0 < min_len || n1 < min_len) continue;
        const double gap = s0 / static_cast<double>(n0) -
                           (sum_ - s0) / static_cast<double>(n1);
        if (std::abs(gap) >= CutThreshold(static_cast<double>(n0),
                                          static_cast<double>(n1))) {
          keep = n1;
        }
      }
    }
    if (keep == 0) break;
    while (width_ > keep) DropOldest();
    cut = true;
  }
  return cut;
}

void Adwin::DropOldest() {
  std::size_t level = levels_.size() - 1;
  while (levels_[level].empty()) --level;
  const Bucket bucket = levels_[level].front();
  levels_[level].pop_front();
  const std::int64_t size = std::int64_t{1} << level;

  width_ -= size;
  sum_ -= bucket.sum;
  last_dropped_ += size;
  if (width_ > 0) {
    const double bucket_mean = bucket.sum / static_cast<double>(size);
    const double rest_mean = sum_ / static_cast<double>(width_);
    const double d = bucket_mean - rest_mean;
    m2_ -= bucket.m2 + static_cast<double>(size) * static_cast<double>(width_) *
                           d * d / static_cast<double>(size + width_);
    if (m2_ < 0.0) m2_ = 0.0;
  } else {
    m2_ = 0.0;
  }
  while (levels_.size() > 1 && levels_.back().empty()) levels_.pop_back();
}

std::size_t Adwin::bucket_count() const {
  std::size_t n = 0;
  for (const auto& row : levels_) n += row.size();
  return n;
}

std::vector<std::int64_t> Adwin::BucketSizes() const {
  std::vector<std::int64_t> sizes;
  for (std::size_t level = levels_.size(); level-- > 0;) {
    for (std::size_t i = 0; i < levels_[level].size(); ++i) {
      sizes.push_back(std::int64_t{1} << level);
    }
  }
  return sizes;
}

ExplanationDriftMonitor::ExplanationDriftMonitor(AdwinConfig config)
    : config_(config) {
  config_.Validate();
}

std::optional<DriftEvent> ExplanationDriftMonitor::Observe(
    const ExplanationFrame& frame) {
  auto it = detectors_.find(frame.feature);
  if (it == detectors_.end()) {
    it = detectors_.emplace(frame.feature, Track{Adwin(config_), frame.t - 1}).first;
  }
  Track& track = it->second;
  if (frame.t <= track.last_t) {
    throw OrderingError("frame for '" + frame.feature + "' at t=" +
                        std::to_string(frame.t) + " arrived after t=" +
                        std::to_string(track.last_t));
  }
  track.last_t = frame.t;
  if (!track.detector.Update(frame.importance)) return std::nullopt;
  return DriftEvent{frame.t, frame.feature, frame};
}

const Adwin& ExplanationDriftMonitor::detector(const std::string& feature) const {
  auto it = detectors_.find(feature);
  if (it == detectors_.end()) {
    throw SchemaMismatchError("no detector for feature '" + feature + "'");
  }
  return it->second.detector;
}

}  // namespace ipdp
