#ifndef IPDP_ADWIN_HPP_
#define IPDP_ADWIN_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipdp/explainer.hpp"

namespace ipdp {

struct AdwinConfig {
  double delta = 0.002;
  int max_buckets = 5;      // M: buckets kept per level before merging
  int min_sub_window = 5;   // smallest |W0| or |W1| that is tested
  int clock = 32;           // splits are tested every `clock` updates
  bool variance_aware = true;

  void Validate() const;
};

// Adaptive windowing change detector (exponential-histogram variant).
//
// The window is stored as buckets of 2^level elements; level 0 holds the
// newest values. After every insertion each bucket boundary splits the window
// into an older W0 and a newer W1, and while some split shows a mean gap of at
// least eps_cut the whole older part W0 is dropped. The retained window is therefore
// always a bucket-aligned suffix of the input.
class Adwin {
 public:
  explicit Adwin(AdwinConfig config = {});

  // Returns true when the window was cut during this update.
  bool Update(double value);

  double mean() const { return width_ > 0 ? sum_ / static_cast<double>(width_) : 0.0; }
  // Population variance of the current window.
  double variance() const { return width_ > 0 ? m2_ / static_cast<double>(width_) : 0.0; }
  std::int64_t width() const { return width_; }
  double sum() const { return sum_; }
  std::size_t bucket_count() const;
  std::int64_t detections() const { return detections_; }
  // Elements removed by the most recent cut (0 if the last update did not cut).
  std::int64_t last_dropped() const { return last_dropped_; }
  // Element counts of all buckets, oldest first.
  std::vector<std::int64_t> BucketSizes() const;
  const AdwinConfig& config() const { return config_; }

  // Threshold for a split into sub-windows of n0 and n1 elements.
  double CutThreshold(double n0, double n1) const;

 private:
  struct Bucket {
    double sum;
    double m2;  // sum of squared deviations from the bucket mean
  };

  void Insert(double value);
  void Compress();
  bool DetectAndCut();
  void DropOldest();

  AdwinConfig config_;
  std::vector<std::deque<Bucket>> levels_;  // levels_[i]: size 2^i, oldest at front
  std::int64_t ticks_ = 0;
  std::int64_t width_ = 0;
  double sum_ = 0.0;
  double m2_ = 0.0;
  std::int64_t detections_ = 0;
  std::int64_t last_dropped_ = 0;
};

// A detector firing on a feature's importance stream, together with the
// explanation that was current at that moment.
struct DriftEvent {
  std::int64_t t = 0;
  std::string feature;
  ExplanationFrame frame;
};

// Feeds each frame's importance into a per-feature detector and reports the
// frame whenever that detector signals.
class ExplanationDriftMonitor {
 public:
  explicit ExplanationDriftMonitor(AdwinConfig config = {});

  // Throws OrderingError when a feature's frames are not strictly increasing
  // in t.
  std::optional<DriftEvent> Observe(const ExplanationFrame& frame);

  const Adwin& detector(const std::string& feature) const;
  std::size_t feature_count() const { return detectors_.size(); }

 private:
  struct Track {
    Adwin detector;
    std::int64_t last_t;
  };

  AdwinConfig config_;
  std::map<std::string, Track, std::less<>> detectors_;
};

}  // namespace ipdp

#endif  // IPDP_ADWIN_HPP_
