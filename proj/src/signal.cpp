#include "intake/signal.hpp"

#include <algorithm>
#include <stdexcept>

namespace intake {

std::vector<Window> sliding_windows(std::size_t series_length, std::size_t window_length,
                                    std::size_t stride) {
  if (window_length < 1) throw std::invalid_argument("sliding_windows: window_length must be >= 1");
  if (stride < 1) throw std::invalid_argument("sliding_windows: stride must be >= 1");
  std::vector<Window> out;
  if (series_length < window_length) return out;
  const std::size_t count = (series_length - window_length) / stride + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(Window{i * stride, window_length, stride});
  return out;
}

InertialRecording::InertialRecording(std::string subject_id, double start_time, double rate,
                                     std::vector<Vec3> accel, std::vector<Vec3> gyro)
    : subject_id_(std::move(subject_id)),
      start_time_(start_time),
      rate_(rate),
      accel_(std::move(accel)),
      gyro_(std::move(gyro)) {
  if (!is_finite(start_time_)) throw std::invalid_argument("InertialRecording: start_time not finite");
  if (!is_finite(rate_) || rate_ <= 0.0) throw std::invalid_argument("InertialRecording: rate must be > 0");
  if (accel_.empty()) throw std::invalid_argument("InertialRecording: needs at least one sample");
  if (accel_.size() != gyro_.size())
    throw std::invalid_argument("InertialRecording: accel and gyro lengths differ");
  for (const Vec3& v : accel_)
    if (!v.finite()) throw std::invalid_argument("InertialRecording: non-finite accel sample");
  for (const Vec3& v : gyro_)
    if (!v.finite()) throw std::invalid_argument("InertialRecording: non-finite gyro sample");
}

ScoreSeries::ScoreSeries(double start_time, double step, std::vector<double> values)
    : start_time_(start_time), step_(step), values_(std::move(values)) {
  if (!is_finite(start_time_)) throw std::invalid_argument("ScoreSeries: start_time not finite");
  if (!is_finite(step_) || step_ <= 0.0) throw std::invalid_argument("ScoreSeries: step must be > 0");
  for (double v : values_)
    if (!is_finite(v)) throw std::invalid_argument("ScoreSeries: non-finite value");
}

void ScoreSeries::require_probabilities() const {
  for (double v : values_)
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("ScoreSeries: value outside [0,1] in probability series");
}

EventSet::EventSet(std::vector<double> times) : times_(std::move(times)) {
  for (double t : times_)
    if (!is_finite(t)) throw std::invalid_argument("EventSet: non-finite timestamp");
  std::sort(times_.begin(), times_.end());
  if (std::adjacent_find(times_.begin(), times_.end()) != times_.end())
    throw std::invalid_argument("EventSet: duplicate timestamp");
}

EventSet EventSet::shifted(double dt) const {
  std::vector<double> t = times_;
  for (double& v : t) v += dt;
  return EventSet(std::move(t));
}

std::string_view to_string(IntervalLabel label) {
  switch (label) {
    case IntervalLabel::meal: return "meal";
    case IntervalLabel::snack: return "snack";
    case IntervalLabel::activity: return "activity";
    case IntervalLabel::other: return "other";
  }
  return "other";
}

std::optional<IntervalLabel> interval_label_from_string(std::string_view s) {
  if (s == "meal") return IntervalLabel::meal;
  if (s == "snack") return IntervalLabel::snack;
  if (s == "activity") return IntervalLabel::activity;
  if (s == "other") return IntervalLabel::other;
  return std::nullopt;
}

IntervalSet::IntervalSet(std::vector<LabeledInterval> intervals) : intervals_(std::move(intervals)) {
  for (const LabeledInterval& iv : intervals_) {
    if (!is_finite(iv.start) || !is_finite(iv.end))
      throw std::invalid_argument("IntervalSet: non-finite endpoint");
    if (!(iv.start < iv.end)) throw std::invalid_argument("IntervalSet: requires start < end");
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const LabeledInterval& a, const LabeledInterval& b) { return a.start < b.start; });
  std::vector<LabeledInterval> merged;
  merged.reserve(intervals_.size());
  for (const LabeledInterval& iv : intervals_) {
    if (!merged.empty()) {
      LabeledInterval& prev = merged.back();
      if (iv.start < prev.end) throw std::invalid_argument("IntervalSet: overlapping intervals");
      if (iv.start == prev.end && iv.label == prev.label) {
        prev.end = iv.end;
        continue;
      }
    }
    merged.push_back(iv);
  }
  intervals_ = std::move(merged);
}

bool IntervalSet::contains(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const LabeledInterval& iv) { return v < iv.start; });
  if (it == intervals_.begin()) return false;
  --it;
  return it->contains(t);
}

IntervalSet IntervalSet::shifted(double dt) const {
  std::vector<LabeledInterval> out = intervals_;
  for (LabeledInterval& iv : out) {
    iv.start += dt;
    iv.end += dt;
  }
  return IntervalSet(std::move(out));
}

double interval_union_duration(const IntervalSet& a) {
  double total = 0.0;
  for (const LabeledInterval& iv : a.intervals()) total += iv.duration();
  return total;
}

IntervalSet interval_intersection(const IntervalSet& a, const IntervalSet& b) {
  std::vector<LabeledInterval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& av = a.intervals();
  const auto& bv = b.intervals();
  while (i < av.size() && j < bv.size()) {
    const double lo = std::max(av[i].start, bv[j].start);
    const double hi = std::min(av[i].end, bv[j].end);
    if (lo < hi) out.push_back(LabeledInterval{lo, hi, IntervalLabel::other});
    if (av[i].end < bv[j].end)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

TriaxialSeries::TriaxialSeries(double start_time, double rate, std::vector<Vec3> samples)
    : start_time_(start_time), rate_(rate), samples_(std::move(samples)) {
  if (!is_finite(start_time_)) throw std::invalid_argument("TriaxialSeries: start_time not finite");
  if (!is_finite(rate_) || rate_ <= 0.0) throw std::invalid_argument("TriaxialSeries: rate must be > 0");
  for (const Vec3& v : samples_)
    if (!v.finite()) throw std::invalid_argument("TriaxialSeries: non-finite sample");
}

}  // namespace intake
