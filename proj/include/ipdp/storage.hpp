#ifndef IPDP_STORAGE_HPP_
#define IPDP_STORAGE_HPP_

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <vector>

namespace ipdp {

// Rolling maximum over the last `window` updates.
//
// Entries are kept strictly decreasing in value from front to back, so the
// front always holds the current maximum. An incoming value first evicts
// expired entries from the front, then prunes every entry <= itself from the
// back. With iid input only O(log window) entries survive; a strictly
// decreasing input fills the store up to `window` entries.
class ExtremeValueStore {
 public:
  struct Entry {
    double value;
    std::int64_t inserted_at;
  };

  explicit ExtremeValueStore(std::int64_t window);

  // `t` must be strictly greater than the previous update's time index.
  void Update(double x, std::int64_t t);
  // Same as Update(x, last_t + 1).
  void Update(double x) { Update(x, last_t_ + 1); }

  // Throws EmptyStoreError before the first update.
  double Max() const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::int64_t window() const { return window_; }
  const std::deque<Entry>& entries() const { return entries_; }

 private:
  std::int64_t window_;
  std::int64_t last_t_ = 0;
  bool started_ = false;
  std::deque<Entry> entries_;
};

// Rolling min and max; the min side is a max store over negated values.
class RollingExtremes {
 public:
  explicit RollingExtremes(std::int64_t window) : max_(window), neg_min_(window) {}

  void Update(double x, std::int64_t t) {
    max_.Update(x, t);
    neg_min_.Update(-x, t);
  }
  void Update(double x) {
    max_.Update(x);
    neg_min_.Update(-x);
  }

  double Max() const { return max_.Max(); }
  double Min() const { return -neg_min_.Max(); }
  bool empty() const { return max_.empty(); }
  std::size_t size() const { return max_.size() + neg_min_.size(); }

  const ExtremeValueStore& max_store() const { return max_; }
  const ExtremeValueStore& negated_min_store() const { return neg_min_; }

 private:
  ExtremeValueStore max_;
  ExtremeValueStore neg_min_;
};

enum class VictimPolicy {
  kOldest,   // evict the longest-resident value (queue order)
  kUniform,  // evict a uniformly drawn slot
};

// Fixed-capacity reservoir with entrance probability. Once full, each update
// is admitted with probability `entrance_probability`; an admitted value
// replaces a victim chosen by the policy and is appended at the back, so slots
// stay in insertion order. With the oldest-first policy the reservoir covers
// roughly the last capacity / entrance_probability observations.
class FrequencyReservoir {
 public:
  FrequencyReservoir(std::size_t capacity, double entrance_probability,
                     VictimPolicy policy = VictimPolicy::kOldest,
                     std::uint64_t seed = 0);

  void Update(double x);

  // Nearest-rank empirical quantile of the stored values.
  double Quantile(double q) const;
  // Several quantiles sharing one sort.
  std::vector<double> Quantiles(std::span<const double> qs) const;

  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }
  std::size_t capacity() const { return capacity_; }
  double entrance_probability() const { return entrance_probability_; }
  double effective_window() const {
    return static_cast<double>(capacity_) / entrance_probability_;
  }
  VictimPolicy policy() const { return policy_; }
  const std::deque<double>& slots() const { return slots_; }

 private:
  std::size_t capacity_;
  double entrance_probability_;
  VictimPolicy policy_;
  std::mt19937_64 rng_;
  std::deque<double> slots_;
};

// Nearest-rank quantile of an already sorted, non-empty range.
double NearestRankQuantile(std::span<const double> sorted, double q);

}  // namespace ipdp

#endif  // IPDP_STORAGE_HPP_
