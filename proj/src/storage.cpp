#include "ipdp/storage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipdp/error.hpp"

namespace ipdp {

ExtremeValueStore::ExtremeValueStore(std::int64_t window) : window_(window) {
  if (window_ < 1) throw ConfigError("extreme value window must be >= 1");
}

void ExtremeValueStore::Update(double x, std::int64_t t) {
  if (!std::isfinite(x)) throw InvalidValueError("non-finite value in extreme store");
  if (started_ && t <= last_t_) {
    throw OrderingError("extreme store time index must increase (got " +
                        std::to_string(t) + " after " + std::to_string(last_t_) +
                        ")");
  }
  started_ = true;
  last_t_ = t;
  while (!entries_.empty() && t - entries_.front().inserted_at >= window_) {
    entries_.pop_front();
  }
  while (!entries_.empty() && entries_.back().value <= x) {
    entries_.pop_back();
  }
  entries_.push_back({x, t});
}

double ExtremeValueStore::Max() const {
  if (entries_.empty()) throw EmptyStoreError("extreme store is empty");
  return entries_.front().value;
}

FrequencyReservoir::FrequencyReservoir(std::size_t capacity,
                                       double entrance_probability,
                                       VictimPolicy policy, std::uint64_t seed)
    : capacity_(capacity),
      entrance_probability_(entrance_probability),
      policy_(policy),
      rng_(seed) {
  if (capacity_ < 1) throw ConfigError("reservoir capacity must be >= 1");
  if (!(entrance_probability_ > 0.0 && entrance_probability_ <= 1.0)) {
    throw ConfigError("entrance probability must lie in (0, 1]");
  }
}

void FrequencyReservoir::Update(double x) {
  if (!std::isfinite(x)) throw InvalidValueError("non-finite value in reservoir");
  if (slots_.size() < capacity_) {
    slots_.push_back(x);
    return;
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng_) > entrance_probability_) return;
  if (policy_ == VictimPolicy::kOldest) {
    slots_.pop_front();
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
    slots_.erase(slots_.begin() + static_cast<std::ptrdiff_t>(pick(rng_)));
  }
  slots_.push_back(x);
}

double NearestRankQuantile(std::span<const double> sorted, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidValueError("quantile must lie in [0, 1]");
  }
  if (sorted.empty()) throw EmptyStoreError("quantile of an empty store");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double FrequencyReservoir::Quantile(double q) const {
  const double qs[] = {q};
  return Quantiles(qs).front();
}

std::vector<double> FrequencyReservoir::Quantiles(std::span<const double> qs) const {
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw InvalidValueError("quantile must lie in [0, 1]");
    }
  }
  if (slots_.empty()) throw EmptyStoreError("reservoir is empty");
  std::vector<double> sorted(slots_.begin(), slots_.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) out.push_back(NearestRankQuantile(sorted, q));
  return out;
}

}  // namespace ipdp
