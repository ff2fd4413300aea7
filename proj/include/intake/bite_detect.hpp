#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "intake/signal.hpp"

// In-meal food-intake-cycle (bite) detection: pluggable window scorers,
// wrist-micromovement sequence validation, and local-maxima event extraction.

namespace intake {

// Atomic 0.2 s wrist action classes: pick food up (p), move up to the mouth
// (u), insert into mouth (m), move down (d), other movement (o), no movement
// (n).
enum class Micromovement { pick, up, mouth, down, other, idle };

inline constexpr std::size_t kMicromovementCount = 6;

char to_code(Micromovement m);
std::optional<Micromovement> micromovement_from_code(char code);

// Probabilities keyed by Micromovement enum order; must sum to 1 within 1e-6.
struct MicromovementDistribution {
  std::array<double, kMicromovementCount> probs{};

  void validate() const;
};

// True iff the sequence starts with pick, ends with down, and has a mouth
// micromovement in between. Exactly the three conditions, nothing else.
bool is_valid_fi_sequence(std::span<const Micromovement> seq);

// Argmax code; ties break toward the lower enum value (p<u<m<d<o<n).
Micromovement hard_assign(const MicromovementDistribution& dist);

// One scorer window over an inertial recording.
struct WindowView {
  std::span<const Vec3> accel;
  std::span<const Vec3> gyro;
  double rate = 1.0;
  double start_time = 0.0;

  std::size_t size() const { return accel.size(); }
  double duration() const { return static_cast<double>(size()) / rate; }
  double center_time() const {
    return start_time + (static_cast<double>(size()) - 1.0) / (2.0 * rate);
  }
};

// Maps a window of inertial samples to a bite probability in [0, 1]. Scorers
// must be pure: the same window always yields the same score.
class WindowScorer {
 public:
  virtual ~WindowScorer() = default;
  virtual double score(const WindowView& window) const = 0;
};

enum class ScorerKind { external_scores, roll_threshold_baseline, oracle_synthetic };

struct ScorerConfig {
  ScorerKind kind = ScorerKind::external_scores;
  double window_s = 5.0;        // scored segment length
  double micro_window_s = 0.2;  // stride between scored segments
  double sequence_s = 3.6;      // reserved for sequence-based scorers

  void validate() const;
};

struct PeakPickConfig {
  double threshold = 0.5;
  double min_separation_s = 1.0;

  void validate() const;
};

// Scores every window_s-long window at stride micro_window_s. Score
// timestamps sit at window centers. A recording shorter than one window
// yields an empty series.
ScoreSeries score_windows(const InertialRecording& rec, const ScorerConfig& cfg,
                          const WindowScorer& scorer);

// Events at local score maxima with value >= threshold. A plateau counts as
// one maximum at its leftmost sample. Maxima closer than min_separation_s are
// suppressed greedily by height (ties keep the earlier one).
EventSet pick_bite_events(const ScoreSeries& scores, const PeakPickConfig& cfg);

struct RollBaselineConfig {
  double pos_thresh = 1.0;    // rad/s
  double neg_thresh = -1.0;   // rad/s
  double refractory_s = 8.0;
  int roll_axis = 0;          // gyro axis collinear with the forearm

  void validate() const;
};

// Single-gyro-channel comparator: a bite is a positive roll-velocity crossing
// followed by a negative one within the refractory window; at most one event
// per refractory period. Event timestamps sit at the negative crossing.
EventSet roll_threshold_baseline(const InertialRecording& rec, const RollBaselineConfig& cfg);

// Scorer that replays a precomputed score series (nearest sample to the
// window center; 0 outside the series span).
class PrecomputedScorer : public WindowScorer {
 public:
  explicit PrecomputedScorer(ScoreSeries scores);
  double score(const WindowView& window) const override;

 private:
  ScoreSeries scores_;
};

// Scorer with perfect knowledge of ground-truth bite moments: 1 when a truth
// event lies within half a stride of the window center, else 0.
class OracleScorer : public WindowScorer {
 public:
  OracleScorer(EventSet truth, double micro_window_s);
  double score(const WindowView& window) const override;

 private:
  EventSet truth_;
  double micro_window_s_;
};

// Roll-threshold baseline adapted to the scorer interface: runs the crossing
// detector on the window alone and scores by how close the detected gesture
// is to the window center (1 at dead center, 0 past half a window).
class RollExcursionScorer : public WindowScorer {
 public:
  explicit RollExcursionScorer(RollBaselineConfig cfg);
  double score(const WindowView& window) const override;

 private:
  RollBaselineConfig cfg_;
};

}  // namespace intake
