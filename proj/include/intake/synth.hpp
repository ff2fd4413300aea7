#pragma once

#include <cstdint>
#include <vector>

#include "intake/signal.hpp"

// Deterministic synthetic all-day recordings with exact ground truth. Each
// embedded bite is a sinusoidal roll-velocity excursion (+A then -A over ~2 s)
// with a small accelerometer transient, so both the oracle scorer and the
// roll-threshold baseline can see it. Confounders add walking oscillations and
// isolated bite-like wrist gestures outside meals.

namespace intake {

struct SynthConfig {
  std::uint64_t seed = 1;
  double duration_s = 14400.0;
  double rate = 25.0;
  int n_meals = 3;
  double meal_duration_min_s = 600.0;
  double meal_duration_max_s = 1200.0;
  double bite_rate_min_per_min = 3.0;
  double bite_rate_max_per_min = 6.0;
  bool walking = true;
  bool gesturing = false;
  double noise_std = 0.05;

  void validate() const;
};

struct SynthTruth {
  EventSet bites;                 // excursion centers
  IntervalSet bite_intervals;     // one span per excursion, label other
  IntervalSet meals;              // label meal
  IntervalSet activity;           // walking segments, label activity
  std::vector<std::size_t> planned_bites_per_meal;
};

struct SynthResult {
  InertialRecording recording;
  SynthTruth truth;
};

// Deterministic for a fixed config (all randomness flows from cfg.seed through
// a fixed draw order). Throws on infeasible meal packing.
SynthResult synth_generate(const SynthConfig& cfg);

}  // namespace intake
