#pragma once

#include "intake/signal.hpp"

// All-day meal localization from detected bite events, plus two comparator
// methods: 1-D DBSCAN over bite timestamps and a roll-variance state machine.

namespace intake {

struct MealLocalizeConfig {
  double density_window_s = 60.0;   // span a dense bite group must fit in
  int density_threshold = 2;        // bites per density window
  double merge_gap_s = 180.0;
  double min_meal_s = 180.0;

  void validate() const;
};

// Density-based localization: dense bite groups open candidate regions,
// regions within merge_gap_s of each other merge until fixpoint, and merged
// regions shorter than min_meal_s are discarded. Survivors are labeled meal.
IntervalSet localize_meals(const EventSet& bites, const MealLocalizeConfig& cfg);

struct DbscanConfig {
  double eps_s = 60.0;
  int min_pts = 2;

  void validate() const;
};

// Standard DBSCAN on the 1-D timestamps. Each cluster becomes the interval
// [earliest event, latest event] labeled meal; noise points and single-instant
// clusters produce no interval.
IntervalSet dbscan_1d(const EventSet& bites, const DbscanConfig& cfg);

struct FsmConfig {
  double variance_window_s = 60.0;
  double enter_threshold = 0.05;   // (rad/s)^2; enter "possibly eating" below this
  double exit_threshold = 0.15;    // leave it above this; enter <= exit for hysteresis
  int roll_axis = 0;

  void validate() const;
};

// Two-state segmentation on rolling roll-velocity variance: low variance means
// possibly eating. Each possibly-eating span becomes an interval labeled meal.
IntervalSet fsm_segmentation(const InertialRecording& rec, const FsmConfig& cfg);

}  // namespace intake
