#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "intake/signal.hpp"

// Chewing detection: spectral/statistical feature extraction on PPG and audio
// windows, logistic scoring, score-level late fusion, accelerometer activity
// gating, and chew -> bout -> episode aggregation.

namespace intake {

// Per-window feature vectors on a uniform timeline (row-major).
struct FeatureMatrix {
  double start_time = 0.0;
  double step = 0.0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::size_t rows() const { return cols == 0 ? 0 : data.size() / cols; }
  std::span<const double> row(std::size_t r) const {
    return std::span(data).subspan(r * cols, cols);
  }
  double time_at(std::size_t r) const { return start_time + static_cast<double>(r) * step; }
  void validate() const;
};

// Raw input bundle: PPG is required for the fusion pipeline, audio may arrive
// as raw samples or as precomputed per-window features, accel drives gating.
struct ChewStreams {
  ScoreSeries ppg;
  std::optional<ScoreSeries> audio;
  std::optional<FeatureMatrix> audio_features;
  std::optional<TriaxialSeries> accel;
};

struct FusionConfig {
  double alpha = 1.0;        // relative importance of audio over PPG
  double a_fusion = 0.51;    // decision threshold, a little over 0.5
  double ppg_window_s = 5.0;
  double audio_window_s = 0.2;

  void validate() const;
};

struct GateConfig {
  double window_s = 5.0;
  double magnitude_var_threshold = 1.0;  // (m/s^2)^2

  void validate() const;
};

struct BoutConfig {
  double chew_gap_s = 2.0;
  double episode_gap_s = 60.0;

  void validate() const;
};

// PPG band-energy features over the mean-removed window:
// [total energy, energy 0.5-1 Hz, energy 1-3 Hz (chewing band),
//  energy 3-5 Hz, chewing-band ratio]. One-sided spectrum, DC excluded.
// The window must cover at least 2 s.
std::vector<double> ppg_features(std::span<const double> window, double rate);

inline constexpr std::size_t kPpgFeatureCount = 5;

// Audio texture features: log energies over an 8-band filter bank spanning
// (0, Nyquist], skewness, excess kurtosis, and the Higuchi fractal dimension.
// Zero-variance windows set skewness/kurtosis to 0.
std::vector<double> audio_features(std::span<const double> window, double rate);

inline constexpr std::size_t kAudioBandCount = 8;
inline constexpr std::size_t kAudioFeatureCount = kAudioBandCount + 3;

// Higuchi curve-length estimator; ~1 for smooth curves, ~2 for white noise.
double higuchi_fractal_dimension(std::span<const double> x, int k_max = 8);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
};

// Logistic of the affine map; stands in for a trained per-modality classifier.
double linear_score(std::span<const double> features, const LinearModel& model);

// Boolean chewing decisions on a uniform timeline.
struct ChewMask {
  double start_time = 0.0;
  double step = 0.0;
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * step; }
};

// Late fusion: mask[n] = s_ppg[n] + alpha * s_audio[n] > a_fusion (strict).
// Audio scores are mean-pooled into each PPG window span first; spans with no
// audio samples contribute 0.
ChewMask fuse(const ScoreSeries& s_ppg, const ScoreSeries& s_audio, const FusionConfig& cfg);

// High-physical-activity intervals: rolling variance of the acceleration
// magnitude above the configured threshold. Label activity.
IntervalSet activity_gate(const TriaxialSeries& accel, const GateConfig& cfg);

// Zeroes mask entries whose timestamps fall inside the gated intervals.
ChewMask apply_gate(const ChewMask& mask, const IntervalSet& activity);

struct ChewAggregate {
  IntervalSet bouts;     // label other
  IntervalSet episodes;  // label meal; classify downstream
};

// Maximal true-runs become chew segments; segments with gaps <= chew_gap_s
// merge into bouts, bouts with gaps <= episode_gap_s into episodes.
ChewAggregate aggregate_chews(const ChewMask& mask, const BoutConfig& cfg);

// Non-overlapping windows of a raw stream scored through feature extraction +
// logistic model. Score timestamps sit at window centers.
ScoreSeries ppg_score_series(const ScoreSeries& ppg_raw, double window_s, const LinearModel& model);
ScoreSeries audio_score_series(const ScoreSeries& audio_raw, double window_s,
                               const LinearModel& model);
// Scores precomputed feature rows (e.g. released audio features).
ScoreSeries feature_matrix_scores(const FeatureMatrix& features, const LinearModel& model);

struct ChewDetectResult {
  ScoreSeries s_ppg;
  ScoreSeries s_audio;
  IntervalSet activity;
  ChewMask mask;
  ChewAggregate aggregate;
};

// Whole pipeline over a raw stream bundle: score PPG windows, score audio
// (precomputed features win over raw samples; with neither, the audio term is
// neutralized via alpha = 0), fuse, gate on the accelerometer when present,
// and aggregate.
ChewDetectResult detect_chews(const ChewStreams& streams, const FusionConfig& fusion,
                              const GateConfig& gate, const BoutConfig& bouts,
                              const LinearModel& ppg_model, const LinearModel& audio_model);

}  // namespace intake
