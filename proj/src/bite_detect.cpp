#include "intake/bite_detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace intake {

namespace {

constexpr const char* kCodes = "pumdon";

double roll_component(const Vec3& v, int axis) {
  switch (axis) {
    case 0: return v.x;
    case 1: return v.y;
    default: return v.z;
  }
}

// Crossing detector shared by the baseline and its scorer adaptation.
// Emits the timestamp of each qualifying negative crossing.
std::vector<double> roll_crossing_events(std::span<const Vec3> gyro, double rate,
                                         double start_time, const RollBaselineConfig& cfg) {
  std::vector<double> events;
  bool armed = false;
  double armed_at = 0.0;
  double last_event = -std::numeric_limits<double>::infinity();
  bool above = false;  // tracks being past pos_thresh so re-arming needs a fresh crossing
  for (std::size_t i = 0; i < gyro.size(); ++i) {
    const double t = start_time + static_cast<double>(i) / rate;
    const double v = roll_component(gyro[i], cfg.roll_axis);
    if (v >= cfg.pos_thresh) {
      if (!above && !armed && t - last_event >= cfg.refractory_s) {
        armed = true;
        armed_at = t;
      }
      above = true;
    } else {
      above = false;
      if (armed && v <= cfg.neg_thresh) {
        if (t - armed_at <= cfg.refractory_s) {
          events.push_back(t);
          last_event = t;
        }
        armed = false;
      }
    }
  }
  return events;
}

}  // namespace

char to_code(Micromovement m) { return kCodes[static_cast<std::size_t>(m)]; }

std::optional<Micromovement> micromovement_from_code(char code) {
  for (std::size_t i = 0; i < kMicromovementCount; ++i)
    if (kCodes[i] == code) return static_cast<Micromovement>(i);
  return std::nullopt;
}

void MicromovementDistribution::validate() const {
  double sum = 0.0;
  for (double p : probs) {
    if (!is_finite(p) || p < 0.0)
      throw std::invalid_argument("MicromovementDistribution: probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("MicromovementDistribution: probabilities must sum to 1");
}

bool is_valid_fi_sequence(std::span<const Micromovement> seq) {
  if (seq.empty()) throw std::invalid_argument("is_valid_fi_sequence: empty sequence");
  if (seq.front() != Micromovement::pick || seq.back() != Micromovement::down) return false;
  for (std::size_t i = 1; i + 1 < seq.size(); ++i)
    if (seq[i] == Micromovement::mouth) return true;
  return false;
}

Micromovement hard_assign(const MicromovementDistribution& dist) {
  dist.validate();
  std::size_t best = 0;
  for (std::size_t i = 1; i < kMicromovementCount; ++i)
    if (dist.probs[i] > dist.probs[best]) best = i;
  return static_cast<Micromovement>(best);
}

void ScorerConfig::validate() const {
  if (!(window_s > 0.0) || !(micro_window_s > 0.0) || !(sequence_s > 0.0))
    throw std::invalid_argument("ScorerConfig: durations must be > 0");
  if (micro_window_s > sequence_s)
    throw std::invalid_argument("ScorerConfig: micro_window_s must not exceed sequence_s");
}

void PeakPickConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw std::invalid_argument("PeakPickConfig: threshold must lie in [0,1]");
  if (!(min_separation_s >= 0.0))
    throw std::invalid_argument("PeakPickConfig: min_separation_s must be >= 0");
}

void RollBaselineConfig::validate() const {
  if (!(pos_thresh > 0.0) || !(neg_thresh < 0.0))
    throw std::invalid_argument("RollBaselineConfig: thresholds must straddle zero");
  if (!(refractory_s > 0.0))
    throw std::invalid_argument("RollBaselineConfig: refractory_s must be > 0");
  if (roll_axis < 0 || roll_axis > 2)
    throw std::invalid_argument("RollBaselineConfig: roll_axis must be 0, 1 or 2");
}

ScoreSeries score_windows(const InertialRecording& rec, const ScorerConfig& cfg,
                          const WindowScorer& scorer) {
  cfg.validate();
  const auto window_len = static_cast<std::size_t>(std::llround(cfg.window_s * rec.rate()));
  const auto stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.micro_window_s * rec.rate())));
  if (window_len < 1 || rec.size() < window_len) return ScoreSeries{};

  const std::vector<Window> windows = sliding_windows(rec.size(), window_len, stride);
  std::vector<double> values(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const Window& w = windows[i];
    const WindowView view{std::span(rec.accel()).subspan(w.start, w.length),
                          std::span(rec.gyro()).subspan(w.start, w.length), rec.rate(),
                          rec.time_at(w.start)};
    const double s = scorer.score(view);
    if (!is_finite(s) || s < 0.0 || s > 1.0)
      throw std::invalid_argument("score_windows: scorer produced a value outside [0,1]");
    values[i] = s;
  }
  const double first_center =
      rec.start_time() + (static_cast<double>(window_len) - 1.0) / (2.0 * rec.rate());
  return ScoreSeries(first_center, static_cast<double>(stride) / rec.rate(), std::move(values));
}

EventSet pick_bite_events(const ScoreSeries& scores, const PeakPickConfig& cfg) {
  cfg.validate();
  const auto& v = scores.values();
  const std::size_t n = v.size();

  // Collect plateau-aware local maxima (leftmost plateau sample).
  struct Candidate {
    double time;
    double value;
  };
  std::vector<Candidate> candidates;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    const bool rises_before = i > 0 && v[i - 1] < v[i];
    const bool falls_after = j + 1 < n && v[j + 1] < v[i];
    if (rises_before && falls_after && v[i] >= cfg.threshold)
      candidates.push_back({scores.time_at(i), v[i]});
    i = j + 1;
  }

  // Greedy suppression by height; ties keep the earlier maximum. Only the
  // nearest accepted neighbors on each side can block a candidate.
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.time < b.time;
  });
  std::set<double> accepted;
  for (const Candidate& c : candidates) {
    auto right = accepted.lower_bound(c.time);
    const bool blocked =
        (right != accepted.end() && *right - c.time < cfg.min_separation_s) ||
        (right != accepted.begin() && c.time - *std::prev(right) < cfg.min_separation_s);
    if (!blocked) accepted.insert(c.time);
  }
  return EventSet(std::vector<double>(accepted.begin(), accepted.end()));
}

EventSet roll_threshold_baseline(const InertialRecording& rec, const RollBaselineConfig& cfg) {
  cfg.validate();
  return EventSet(roll_crossing_events(rec.gyro(), rec.rate(), rec.start_time(), cfg));
}

PrecomputedScorer::PrecomputedScorer(ScoreSeries scores) : scores_(std::move(scores)) {
  scores_.require_probabilities();
}

double PrecomputedScorer::score(const WindowView& window) const {
  if (scores_.empty()) return 0.0;
  const double offset = (window.center_time() - scores_.start_time()) / scores_.step();
  const auto idx = static_cast<long long>(std::llround(offset));
  if (idx < 0 || idx >= static_cast<long long>(scores_.size())) return 0.0;
  return scores_.values()[static_cast<std::size_t>(idx)];
}

OracleScorer::OracleScorer(EventSet truth, double micro_window_s)
    : truth_(std::move(truth)), micro_window_s_(micro_window_s) {
  if (!(micro_window_s_ > 0.0))
    throw std::invalid_argument("OracleScorer: micro_window_s must be > 0");
}

double OracleScorer::score(const WindowView& window) const {
  const double center = window.center_time();
  const auto& t = truth_.times();
  auto it = std::lower_bound(t.begin(), t.end(), center - micro_window_s_ / 2.0);
  if (it != t.end() && *it < center + micro_window_s_ / 2.0) return 1.0;
  return 0.0;
}

RollExcursionScorer::RollExcursionScorer(RollBaselineConfig cfg) : cfg_(cfg) { cfg_.validate(); }

double RollExcursionScorer::score(const WindowView& window) const {
  const std::vector<double> events =
      roll_crossing_events(window.gyro, window.rate, window.start_time, cfg_);
  if (events.empty()) return 0.0;
  const double center = window.center_time();
  const double half = window.duration() / 2.0;
  double best = 0.0;
  for (double t : events) best = std::max(best, 1.0 - std::min(1.0, std::abs(t - center) / half));
  return best;
}

}  // namespace intake
