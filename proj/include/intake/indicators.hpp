#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intake/signal.hpp"

// In-meal and all-day behavioral indicators computed from detected events and
// intervals. Indicator definitions are artifact conventions: the underlying
// quantities are named in the literature without formulas.

namespace intake {

struct MealRecord {
  LabeledInterval interval;
  EventSet bites;                    // restricted to the interval
  std::optional<IntervalSet> bouts;  // chewing bouts, when available

  void validate() const;
};

struct DayRecord {
  std::string date;        // opaque tag, e.g. "2026-03-14"
  double day_start = 0.0;  // epoch seconds of local midnight
  std::vector<MealRecord> meals;
  std::vector<MealRecord> snacks;

  void validate() const;
};

struct IndicatorConfig {
  double snack_max_duration_s = 600.0;
  int snack_max_bites = 8;
  double breakfast_start_tod_s = 6.0 * 3600.0;   // local time of day
  double breakfast_end_tod_s = 10.0 * 3600.0;

  void validate() const;
};

struct InMealIndicators {
  double duration_s = 0.0;
  std::size_t bites_count = 0;
  double bites_per_min = 0.0;
  // Least-squares slope (s per index) of successive inter-bite intervals, or
  // inter-bout intervals when bouts are present. Positive means slowing down.
  double bout_deceleration = 0.0;
  bool deceleration_defined = false;  // needs >= 3 events
  double total_intake_proxy = 0.0;    // bite count; grams are out of scope
};

InMealIndicators in_meal_indicators(const MealRecord& m);

struct AllDayIndicators {
  std::size_t main_meals = 0;
  std::size_t snack_count = 0;
  bool ate_breakfast = false;
  // Population standard deviation (minutes) of first-eating-event local start
  // times across history plus the current day; lower is more consistent.
  double schedule_consistency_min = 0.0;
  bool consistency_defined = false;
};

AllDayIndicators all_day_indicators(const DayRecord& day, const IndicatorConfig& cfg,
                                    std::span<const DayRecord> history);

enum class EpisodeKind { meal, snack };

// Snack iff duration <= snack_max_duration_s and bite count <= snack_max_bites
// (both inclusive); otherwise meal.
EpisodeKind classify_episode(const MealRecord& e, const IndicatorConfig& cfg);

// Least-squares slope of y over x = 0..n-1; used for deceleration and exposed
// for reuse.
double least_squares_slope(std::span<const double> y);

}  // namespace intake
