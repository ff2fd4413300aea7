#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Core time-series and interval types shared by all pipelines.
// All timestamps are double-precision seconds; intervals are half-open
// [start, end). Types are immutable after construction and validate their
// invariants in the constructor.

namespace intake {

inline bool is_finite(double v) { return std::isfinite(v); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const { return is_finite(x) && is_finite(y) && is_finite(z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }

// In-bounds view of `length` samples starting at `start`, produced by a
// sliding-window pass with the given stride.
struct Window {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t stride = 1;
};

// All maximal in-bounds windows over a series of `series_length` samples.
// A series shorter than the window yields an empty result.
std::vector<Window> sliding_windows(std::size_t series_length, std::size_t window_length,
                                    std::size_t stride);

// Uniformly sampled 3-axis acceleration + angular velocity. Samples are
// implicitly at start_time + k/rate.
class InertialRecording {
 public:
  InertialRecording(std::string subject_id, double start_time, double rate,
                    std::vector<Vec3> accel, std::vector<Vec3> gyro);

  const std::string& subject_id() const { return subject_id_; }
  double start_time() const { return start_time_; }
  double rate() const { return rate_; }
  const std::vector<Vec3>& accel() const { return accel_; }
  const std::vector<Vec3>& gyro() const { return gyro_; }

  std::size_t size() const { return accel_.size(); }
  double duration() const { return static_cast<double>(size()) / rate_; }
  double time_at(std::size_t i) const { return start_time_ + static_cast<double>(i) / rate_; }
  double end_time() const { return start_time_ + duration(); }

 private:
  std::string subject_id_;
  double start_time_;
  double rate_;
  std::vector<Vec3> accel_;
  std::vector<Vec3> gyro_;
};

// Uniformly sampled scalar stream: raw sensor samples or classifier scores.
// Values must be finite; probability semantics are opt-in via
// require_probabilities().
class ScoreSeries {
 public:
  ScoreSeries() = default;
  ScoreSeries(double start_time, double step, std::vector<double> values);

  double start_time() const { return start_time_; }
  double step() const { return step_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double time_at(std::size_t i) const { return start_time_ + static_cast<double>(i) * step_; }

  // Throws if any value falls outside [0, 1].
  void require_probabilities() const;

 private:
  double start_time_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

// Sorted set of timestamped point events (bites, chews).
class EventSet {
 public:
  EventSet() = default;
  // Sorts the input; rejects non-finite values and duplicate timestamps.
  explicit EventSet(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  EventSet shifted(double dt) const;

 private:
  std::vector<double> times_;
};

enum class IntervalLabel { meal, snack, activity, other };

std::string_view to_string(IntervalLabel label);
std::optional<IntervalLabel> interval_label_from_string(std::string_view s);

struct LabeledInterval {
  double start = 0.0;
  double end = 0.0;
  IntervalLabel label = IntervalLabel::other;

  double duration() const { return end - start; }
  bool contains(double t) const { return t >= start && t < end; }
};

// Sorted, pairwise non-overlapping labeled intervals. Touching intervals with
// the same label are merged on construction so equal sets compare equal.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<LabeledInterval> intervals);

  const std::vector<LabeledInterval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }

  bool contains(double t) const;
  IntervalSet shifted(double dt) const;

 private:
  std::vector<LabeledInterval> intervals_;
};

// Total measure of the union; the sum of lengths since members never overlap.
double interval_union_duration(const IntervalSet& a);

// Exact pairwise intersections, sorted; labels are dropped (label = other).
IntervalSet interval_intersection(const IntervalSet& a, const IntervalSet& b);

// Uniformly sampled 3-vector stream (e.g. a lone accelerometer).
class TriaxialSeries {
 public:
  TriaxialSeries() = default;
  TriaxialSeries(double start_time, double rate, std::vector<Vec3> samples);

  double start_time() const { return start_time_; }
  double rate() const { return rate_; }
  const std::vector<Vec3>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double time_at(std::size_t i) const { return start_time_ + static_cast<double>(i) / rate_; }
  double end_time() const { return start_time_ + static_cast<double>(size()) / rate_; }

 private:
  double start_time_ = 0.0;
  double rate_ = 1.0;
  std::vector<Vec3> samples_;
};

}  // namespace intake
