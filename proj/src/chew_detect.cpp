#include "intake/chew_detect.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace intake {

namespace {

// FFTW plan creation is not thread-safe; execution is.
std::mutex g_fftw_mutex;

// One-sided power spectrum |X_k|^2 for k = 0..N/2 of the mean-removed window.
std::vector<double> power_spectrum(std::span<const double> window) {
  const std::size_t n = window.size();
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> in(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = window[i] - mean;

  const std::size_t bins = n / 2 + 1;
  std::vector<double> power(bins);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  for (std::size_t k = 0; k < bins; ++k) power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
    fftw_free(out);
  }
  return power;
}

double pooled_audio_mean(const ScoreSeries& audio, double lo, double hi) {
  if (audio.empty()) return 0.0;
  // First sample index with time >= lo.
  double from = std::ceil((lo - audio.start_time()) / audio.step() - 1e-9);
  auto i = static_cast<long long>(std::max(0.0, from));
  double acc = 0.0;
  std::size_t count = 0;
  for (; i < static_cast<long long>(audio.size()); ++i) {
    const double t = audio.time_at(static_cast<std::size_t>(i));
    if (t >= hi) break;
    if (t < lo) continue;
    acc += audio.values()[static_cast<std::size_t>(i)];
    ++count;
  }
  return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

ScoreSeries windowed_scores(const ScoreSeries& raw, double window_s,
                            std::vector<double> (*extract)(std::span<const double>, double),
                            const LinearModel& model) {
  const double rate = 1.0 / raw.step();
  const auto window_len = static_cast<std::size_t>(std::llround(window_s * rate));
  if (window_len < 1 || raw.size() < window_len) return ScoreSeries{};
  const std::vector<Window> windows = sliding_windows(raw.size(), window_len, window_len);
  std::vector<double> values(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto feats =
        extract(std::span(raw.values()).subspan(windows[i].start, windows[i].length), rate);
    values[i] = linear_score(feats, model);
  }
  const double first_center =
      raw.start_time() + (static_cast<double>(window_len) - 1.0) / (2.0 * rate);
  return ScoreSeries(first_center, static_cast<double>(window_len) / rate, std::move(values));
}

}  // namespace

void FeatureMatrix::validate() const {
  if (cols == 0) throw std::invalid_argument("FeatureMatrix: cols must be > 0");
  if (data.size() % cols != 0)
    throw std::invalid_argument("FeatureMatrix: data size must be a multiple of cols");
  if (!(step > 0.0)) throw std::invalid_argument("FeatureMatrix: step must be > 0");
  for (double v : data)
    if (!is_finite(v)) throw std::invalid_argument("FeatureMatrix: non-finite value");
}

void FusionConfig::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("FusionConfig: alpha must be >= 0");
  if (!is_finite(a_fusion)) throw std::invalid_argument("FusionConfig: a_fusion must be finite");
  if (!(ppg_window_s > 0.0) || !(audio_window_s > 0.0))
    throw std::invalid_argument("FusionConfig: window lengths must be > 0");
}

void GateConfig::validate() const {
  if (!(window_s > 0.0) || !(magnitude_var_threshold > 0.0))
    throw std::invalid_argument("GateConfig: parameters must be > 0");
}

void BoutConfig::validate() const {
  if (!(chew_gap_s > 0.0) || !(episode_gap_s > 0.0))
    throw std::invalid_argument("BoutConfig: gaps must be > 0");
  if (!(chew_gap_s < episode_gap_s))
    throw std::invalid_argument("BoutConfig: chew_gap_s must be below episode_gap_s");
}

std::vector<double> ppg_features(std::span<const double> window, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("ppg_features: rate must be > 0");
  if (static_cast<double>(window.size()) < 2.0 * rate)
    throw std::invalid_argument("ppg_features: window must cover at least 2 s");

  const std::vector<double> power = power_spectrum(window);
  const double hz_per_bin = rate / static_cast<double>(window.size());
  double total = 0.0, low = 0.0, chew = 0.0, high = 0.0;
  for (std::size_t k = 1; k < power.size(); ++k) {
    const double f = hz_per_bin * static_cast<double>(k);
    total += power[k];
    if (f >= 0.5 && f < 1.0)
      low += power[k];
    else if (f >= 1.0 && f <= 3.0)
      chew += power[k];
    else if (f > 3.0 && f <= 5.0)
      high += power[k];
  }
  const double ratio = total > 0.0 ? chew / total : 0.0;
  return {total, low, chew, high, ratio};
}

std::vector<double> audio_features(std::span<const double> window, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("audio_features: rate must be > 0");
  if (window.size() < 32)
    throw std::invalid_argument("audio_features: window must hold at least 32 samples");

  const std::size_t n = window.size();
  const std::vector<double> power = power_spectrum(window);
  const double hz_per_bin = rate / static_cast<double>(n);
  const double nyquist = rate / 2.0;

  std::vector<double> feats;
  feats.reserve(kAudioFeatureCount);
  std::array<double, kAudioBandCount> bands{};
  for (std::size_t k = 1; k < power.size(); ++k) {
    const double f = hz_per_bin * static_cast<double>(k);
    auto b = static_cast<std::size_t>(f / nyquist * kAudioBandCount);
    b = std::min(b, kAudioBandCount - 1);
    bands[b] += power[k];
  }
  for (double e : bands) feats.push_back(std::log(e + 1e-12));

  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : window) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 <= 1e-15 * (1.0 + mean * mean)) {
    feats.push_back(0.0);  // skewness of a (near-)constant window
    feats.push_back(0.0);  // excess kurtosis likewise
  } else {
    feats.push_back(m3 / std::pow(m2, 1.5));
    feats.push_back(m4 / (m2 * m2) - 3.0);
  }
  feats.push_back(higuchi_fractal_dimension(window));
  return feats;
}

double higuchi_fractal_dimension(std::span<const double> x, int k_max) {
  const auto n = static_cast<int>(x.size());
  if (k_max < 2) throw std::invalid_argument("higuchi_fractal_dimension: k_max must be >= 2");
  if (n < 2 * k_max)
    throw std::invalid_argument("higuchi_fractal_dimension: series too short for k_max");

  std::vector<double> xs, ys;
  for (int k = 1; k <= k_max; ++k) {
    double total = 0.0;
    for (int m = 0; m < k; ++m) {
      const int steps = (n - 1 - m) / k;
      if (steps < 1) continue;
      double length = 0.0;
      for (int i = 1; i <= steps; ++i)
        length += std::abs(x[static_cast<std::size_t>(m + i * k)] -
                           x[static_cast<std::size_t>(m + (i - 1) * k)]);
      // Normalization maps the subsampled length back onto the full index span.
      length *= static_cast<double>(n - 1) / (static_cast<double>(steps) * k);
      total += length / k;
    }
    const double mean_len = total / k;
    if (mean_len <= 0.0) return 1.0;  // flat signal: no curve length at any scale
    xs.push_back(std::log(1.0 / k));
    ys.push_back(std::log(mean_len));
  }

  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= static_cast<double>(xs.size());
  y_mean /= static_cast<double>(ys.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - x_mean) * (ys[i] - y_mean);
    den += (xs[i] - x_mean) * (xs[i] - x_mean);
  }
  return num / den;
}

double linear_score(std::span<const double> features, const LinearModel& model) {
  if (features.size() != model.weights.size())
    throw std::invalid_argument("linear_score: feature/weight dimension mismatch");
  double z = model.bias;
  for (std::size_t i = 0; i < features.size(); ++i) z += model.weights[i] * features[i];
  return 1.0 / (1.0 + std::exp(-z));
}

ChewMask fuse(const ScoreSeries& s_ppg, const ScoreSeries& s_audio, const FusionConfig& cfg) {
  cfg.validate();
  if (s_ppg.empty()) throw std::invalid_argument("fuse: empty PPG score series");
  if (s_audio.empty()) throw std::invalid_argument("fuse: empty audio score series");
  const double half = cfg.ppg_window_s / 2.0;
  const double audio_end = s_audio.time_at(s_audio.size() - 1);
  const double ppg_end = s_ppg.time_at(s_ppg.size() - 1);
  if (s_audio.start_time() > ppg_end + half || audio_end < s_ppg.start_time() - half)
    throw std::invalid_argument("fuse: PPG and audio timelines do not overlap");
  ChewMask mask;
  mask.start_time = s_ppg.start_time();
  mask.step = s_ppg.step();
  mask.values.resize(s_ppg.size());
  for (std::size_t n = 0; n < s_ppg.size(); ++n) {
    const double center = s_ppg.time_at(n);
    const double audio_mean = pooled_audio_mean(s_audio, center - half, center + half);
    mask.values[n] = (s_ppg.values()[n] + cfg.alpha * audio_mean > cfg.a_fusion) ? 1 : 0;
  }
  return mask;
}

IntervalSet activity_gate(const TriaxialSeries& accel, const GateConfig& cfg) {
  cfg.validate();
  const std::size_t n = accel.size();
  if (n == 0) return IntervalSet{};
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = accel.samples()[i].norm();

  std::vector<double> sum(n + 1, 0.0), sumsq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + mag[i];
    sumsq[i + 1] = sumsq[i] + mag[i] * mag[i];
  }
  const auto half = static_cast<std::ptrdiff_t>(
      std::max<long long>(1, std::llround(cfg.window_s * accel.rate() / 2.0)));
  std::vector<LabeledInterval> out;
  bool open = false;
  double opened = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half));
    const auto hi = std::min(n, i + static_cast<std::size_t>(half) + 1);
    const double m = static_cast<double>(hi - lo);
    const double mean = (sum[hi] - sum[lo]) / m;
    const double var = std::max(0.0, (sumsq[hi] - sumsq[lo]) / m - mean * mean);
    const bool active = var > cfg.magnitude_var_threshold;
    if (active && !open) {
      open = true;
      opened = accel.time_at(i);
    } else if (!active && open) {
      open = false;
      const double close = accel.time_at(i);
      if (close > opened) out.push_back(LabeledInterval{opened, close, IntervalLabel::activity});
    }
  }
  if (open) out.push_back(LabeledInterval{opened, accel.end_time(), IntervalLabel::activity});
  return IntervalSet(std::move(out));
}

ChewMask apply_gate(const ChewMask& mask, const IntervalSet& activity) {
  ChewMask out = mask;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    if (out.values[i] && activity.contains(out.time_at(i))) out.values[i] = 0;
  return out;
}

ChewAggregate aggregate_chews(const ChewMask& mask, const BoutConfig& cfg) {
  cfg.validate();
  // Each mask sample covers [center - step/2, center + step/2): adjacent true
  // samples tile seamlessly.
  struct Seg {
    double start;
    double end;
  };
  std::vector<Seg> segments;
  const double half = mask.step / 2.0;
  std::size_t i = 0;
  while (i < mask.size()) {
    if (!mask.values[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < mask.size() && mask.values[j + 1]) ++j;
    segments.push_back({mask.time_at(i) - half, mask.time_at(j) + half});
    i = j + 1;
  }

  auto merge_by_gap = [](const std::vector<Seg>& in, double gap) {
    std::vector<Seg> out;
    for (const Seg& s : in) {
      if (!out.empty() && s.start - out.back().end <= gap)
        out.back().end = std::max(out.back().end, s.end);
      else
        out.push_back(s);
    }
    return out;
  };
  const std::vector<Seg> bouts = merge_by_gap(segments, cfg.chew_gap_s);
  const std::vector<Seg> episodes = merge_by_gap(bouts, cfg.episode_gap_s);

  auto to_set = [](const std::vector<Seg>& segs, IntervalLabel label) {
    std::vector<LabeledInterval> ivs;
    ivs.reserve(segs.size());
    for (const Seg& s : segs) ivs.push_back(LabeledInterval{s.start, s.end, label});
    return IntervalSet(std::move(ivs));
  };
  return ChewAggregate{to_set(bouts, IntervalLabel::other), to_set(episodes, IntervalLabel::meal)};
}

ScoreSeries ppg_score_series(const ScoreSeries& ppg_raw, double window_s,
                             const LinearModel& model) {
  return windowed_scores(ppg_raw, window_s, &ppg_features, model);
}

ScoreSeries audio_score_series(const ScoreSeries& audio_raw, double window_s,
                               const LinearModel& model) {
  return windowed_scores(audio_raw, window_s, &audio_features, model);
}

ScoreSeries feature_matrix_scores(const FeatureMatrix& features, const LinearModel& model) {
  features.validate();
  std::vector<double> values(features.rows());
  for (std::size_t r = 0; r < features.rows(); ++r) values[r] = linear_score(features.row(r), model);
  return ScoreSeries(features.start_time, features.step, std::move(values));
}

ChewDetectResult detect_chews(const ChewStreams& streams, const FusionConfig& fusion,
                              const GateConfig& gate, const BoutConfig& bouts,
                              const LinearModel& ppg_model, const LinearModel& audio_model) {
  ChewDetectResult result;
  result.s_ppg = ppg_score_series(streams.ppg, fusion.ppg_window_s, ppg_model);
  if (result.s_ppg.empty())
    throw std::invalid_argument("detect_chews: PPG stream shorter than one window");

  FusionConfig effective = fusion;
  if (streams.audio_features) {
    result.s_audio = feature_matrix_scores(*streams.audio_features, audio_model);
  } else if (streams.audio) {
    result.s_audio = audio_score_series(*streams.audio, fusion.audio_window_s, audio_model);
  } else {
    effective.alpha = 0.0;
    result.s_audio = ScoreSeries(result.s_ppg.start_time(), result.s_ppg.step(),
                                 std::vector<double>(result.s_ppg.size(), 0.0));
  }

  result.mask = fuse(result.s_ppg, result.s_audio, effective);
  if (streams.accel) {
    result.activity = activity_gate(*streams.accel, gate);
    result.mask = apply_gate(result.mask, result.activity);
  }
  result.aggregate = aggregate_chews(result.mask, bouts);
  return result;
}

}  // namespace intake
