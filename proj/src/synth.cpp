#include "intake/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace intake {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGravity = 9.81;
constexpr double kBiteSpan = 2.0;        // excursion duration (s)
constexpr double kBiteAmplitude = 1.5;   // rad/s
constexpr double kMealMargin = 300.0;    // clearance inside each meal slot (s)
constexpr double kWalkMargin = 60.0;     // clearance between walking and meals (s)

// Hand-rolled transforms keep the byte stream identical across standard
// library implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double gaussian(std::mt19937_64& rng) {
  const double u1 = std::max(uniform01(rng), 1e-300);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

struct Span {
  double start;
  double end;
};

}  // namespace

void SynthConfig::validate() const {
  if (!(duration_s > 0.0) || !(rate > 0.0) || !(noise_std >= 0.0))
    throw std::invalid_argument("SynthConfig: duration, rate must be > 0 and noise_std >= 0");
  if (n_meals < 0) throw std::invalid_argument("SynthConfig: n_meals must be >= 0");
  if (!(meal_duration_min_s > 0.0) || meal_duration_min_s > meal_duration_max_s)
    throw std::invalid_argument("SynthConfig: invalid meal duration range");
  if (!(bite_rate_min_per_min > 0.0) || bite_rate_min_per_min > bite_rate_max_per_min)
    throw std::invalid_argument("SynthConfig: invalid bite rate range");
  if (static_cast<double>(n_meals) * meal_duration_max_s > duration_s)
    throw std::invalid_argument("SynthConfig: meals cannot fit in the recording");
}

SynthResult synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.rate));
  if (n == 0) throw std::invalid_argument("SynthConfig: recording would be empty");

  // One meal per equal slot, with kMealMargin clearance at both slot edges so
  // meals can never merge across slots during localization.
  std::vector<Span> meal_spans;
  std::vector<double> meal_rates;
  if (cfg.n_meals > 0) {
    const double slot = cfg.duration_s / cfg.n_meals;
    if (slot < cfg.meal_duration_max_s + 2.0 * kMealMargin)
      throw std::invalid_argument(
          "SynthConfig: infeasible packing, meal slots too small for margins");
    for (int i = 0; i < cfg.n_meals; ++i) {
      const double dur = uniform(rng, cfg.meal_duration_min_s, cfg.meal_duration_max_s);
      const double lo = i * slot + kMealMargin;
      const double hi = (i + 1) * slot - kMealMargin - dur;
      const double start = uniform(rng, lo, hi);
      meal_spans.push_back({start, start + dur});
      meal_rates.push_back(uniform(rng, cfg.bite_rate_min_per_min, cfg.bite_rate_max_per_min));
    }
  }

  // Planned bites: round(rate * duration) per meal, evenly spaced with jitter.
  std::vector<double> bite_times;
  std::vector<LabeledInterval> bite_spans;
  std::vector<std::size_t> planned;
  std::vector<Span> truth_meals;
  for (std::size_t i = 0; i < meal_spans.size(); ++i) {
    const Span& m = meal_spans[i];
    const double dur = m.end - m.start;
    const auto count =
        static_cast<std::size_t>(std::max<long long>(1, std::llround(meal_rates[i] * dur / 60.0)));
    planned.push_back(count);
    const double ibi = dur / static_cast<double>(count);
    double first_start = 0.0, last_end = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double jitter = uniform(rng, -0.2, 0.2) * ibi;
      const double center = m.start + (static_cast<double>(k) + 0.5) * ibi + jitter;
      bite_times.push_back(center);
      const double t0 = center - kBiteSpan / 2.0;
      bite_spans.push_back(LabeledInterval{t0, t0 + kBiteSpan, IntervalLabel::other});
      if (k == 0) first_start = t0;
      last_end = t0 + kBiteSpan;
    }
    truth_meals.push_back({first_start, last_end});
  }

  // Confounder placement in the gaps around meals.
  std::vector<Span> gaps;
  double cursor = 0.0;
  for (const Span& m : truth_meals) {
    if (m.start > cursor) gaps.push_back({cursor, m.start});
    cursor = m.end;
  }
  if (cursor < cfg.duration_s) gaps.push_back({cursor, cfg.duration_s});

  std::vector<Span> walking_spans;
  if (cfg.walking) {
    for (const Span& g : gaps) {
      const double usable = g.end - g.start - 2.0 * kWalkMargin;
      if (usable < 60.0) continue;
      const double len = std::min(300.0, usable);
      const double start = g.start + kWalkMargin + uniform(rng, 0.0, usable - len);
      walking_spans.push_back({start, start + len});
    }
  }

  std::vector<double> gesture_starts;
  if (cfg.gesturing) {
    for (const Span& g : gaps) {
      if (g.end - g.start < 2.0 * kWalkMargin + kBiteSpan) continue;
      for (int attempt = 0; attempt < 10; ++attempt) {
        const double t0 = uniform(rng, g.start + kWalkMargin, g.end - kWalkMargin - kBiteSpan);
        const bool clashes = std::any_of(
            walking_spans.begin(), walking_spans.end(), [&](const Span& w) {
              return t0 < w.end + kWalkMargin && t0 + kBiteSpan > w.start - kWalkMargin;
            });
        if (!clashes) {
          gesture_starts.push_back(t0);
          break;
        }
      }
    }
  }

  // Waveform synthesis: baseline noise + gravity, then overlays.
  std::vector<Vec3> accel(n), gyro(n);
  for (std::size_t i = 0; i < n; ++i) {
    accel[i] = Vec3{cfg.noise_std * gaussian(rng), cfg.noise_std * gaussian(rng),
                    kGravity + cfg.noise_std * gaussian(rng)};
    gyro[i] = Vec3{cfg.noise_std * gaussian(rng), cfg.noise_std * gaussian(rng),
                   cfg.noise_std * gaussian(rng)};
  }
  auto add_excursion = [&](double t0) {
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(t0 * cfg.rate)));
    for (std::size_t i = i0; i < n; ++i) {
      const double t = static_cast<double>(i) / cfg.rate;
      if (t > t0 + kBiteSpan) break;
      const double phase = (t - t0) / kBiteSpan;
      gyro[i].x += kBiteAmplitude * std::sin(2.0 * kPi * phase);
      accel[i].x += 0.6 * std::sin(kPi * phase);
    }
  };
  for (const LabeledInterval& b : bite_spans) add_excursion(b.start);
  for (double t0 : gesture_starts) add_excursion(t0);
  for (const Span& w : walking_spans) {
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(w.start * cfg.rate)));
    for (std::size_t i = i0; i < n; ++i) {
      const double t = static_cast<double>(i) / cfg.rate;
      if (t >= w.end) break;
      const double tau = t - w.start;
      accel[i].z += 3.0 * std::sin(2.0 * kPi * 2.0 * tau);
      accel[i].x += 1.5 * std::sin(2.0 * kPi * 2.0 * tau + 1.3);
      gyro[i].x += 1.2 * std::sin(2.0 * kPi * 1.8 * tau);
    }
  }

  SynthTruth truth;
  truth.bites = EventSet(std::move(bite_times));
  truth.bite_intervals = IntervalSet(std::move(bite_spans));
  std::vector<LabeledInterval> meal_ivs;
  for (const Span& m : truth_meals)
    meal_ivs.push_back(LabeledInterval{m.start, m.end, IntervalLabel::meal});
  truth.meals = IntervalSet(std::move(meal_ivs));
  std::vector<LabeledInterval> act_ivs;
  for (const Span& w : walking_spans)
    act_ivs.push_back(LabeledInterval{w.start, w.end, IntervalLabel::activity});
  truth.activity = IntervalSet(std::move(act_ivs));
  truth.planned_bites_per_meal = std::move(planned);

  InertialRecording rec("synth-" + std::to_string(cfg.seed), 0.0, cfg.rate, std::move(accel),
                        std::move(gyro));
  return SynthResult{std::move(rec), std::move(truth)};
}

}  // namespace intake
