#include "intake/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intake {

namespace {

constexpr double kDaySeconds = 86400.0;

double time_of_day(double t, double day_start) { return t - day_start; }

// First eating-event start (meal or snack) of a day, if any.
std::optional<double> first_event_tod(const DayRecord& day) {
  std::optional<double> best;
  auto consider = [&](const MealRecord& r) {
    const double tod = time_of_day(r.interval.start, day.day_start);
    if (!best || tod < *best) best = tod;
  };
  for (const MealRecord& m : day.meals) consider(m);
  for (const MealRecord& s : day.snacks) consider(s);
  return best;
}

}  // namespace

void MealRecord::validate() const {
  if (!(interval.start < interval.end))
    throw std::invalid_argument("MealRecord: interval requires start < end");
  for (double t : bites.times())
    if (!interval.contains(t))
      throw std::invalid_argument("MealRecord: bite outside the meal interval");
}

void DayRecord::validate() const {
  std::vector<LabeledInterval> all;
  for (const MealRecord& m : meals) {
    m.validate();
    all.push_back(m.interval);
  }
  for (const MealRecord& s : snacks) {
    s.validate();
    all.push_back(s.interval);
  }
  for (const LabeledInterval& iv : all)
    if (iv.start < day_start || iv.end > day_start + kDaySeconds)
      throw std::invalid_argument("DayRecord: episode outside the day");
  std::sort(all.begin(), all.end(),
            [](const LabeledInterval& a, const LabeledInterval& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].start < all[i - 1].end)
      throw std::invalid_argument("DayRecord: overlapping episodes");
}

void IndicatorConfig::validate() const {
  if (!(snack_max_duration_s > 0.0) || snack_max_bites < 1)
    throw std::invalid_argument("IndicatorConfig: snack thresholds must be positive");
  if (!(breakfast_start_tod_s >= 0.0) || !(breakfast_end_tod_s <= kDaySeconds) ||
      !(breakfast_start_tod_s < breakfast_end_tod_s))
    throw std::invalid_argument("IndicatorConfig: invalid breakfast window");
}

double least_squares_slope(std::span<const double> y) {
  const auto n = static_cast<double>(y.size());
  if (y.size() < 2) throw std::invalid_argument("least_squares_slope: needs >= 2 points");
  const double x_mean = (n - 1.0) / 2.0;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    num += dx * (y[i] - y_mean);
    den += dx * dx;
  }
  return num / den;
}

InMealIndicators in_meal_indicators(const MealRecord& m) {
  m.validate();
  InMealIndicators out;
  out.duration_s = m.interval.duration();
  out.bites_count = m.bites.size();
  out.bites_per_min = static_cast<double>(out.bites_count) / (out.duration_s / 60.0);
  out.total_intake_proxy = static_cast<double>(out.bites_count);

  // Inter-event intervals from bouts when present, else from bites.
  std::vector<double> marks;
  if (m.bouts && m.bouts->size() >= 1) {
    for (const LabeledInterval& b : m.bouts->intervals()) marks.push_back(b.start);
  } else {
    marks = m.bites.times();
  }
  if (marks.size() >= 3) {
    std::vector<double> gaps(marks.size() - 1);
    for (std::size_t i = 1; i < marks.size(); ++i) gaps[i - 1] = marks[i] - marks[i - 1];
    out.bout_deceleration = least_squares_slope(gaps);
    out.deceleration_defined = true;
  }
  return out;
}

AllDayIndicators all_day_indicators(const DayRecord& day, const IndicatorConfig& cfg,
                                    std::span<const DayRecord> history) {
  day.validate();
  cfg.validate();
  AllDayIndicators out;
  out.main_meals = day.meals.size();
  out.snack_count = day.snacks.size();

  auto starts_in_breakfast = [&](const MealRecord& r) {
    const double tod = time_of_day(r.interval.start, day.day_start);
    return tod >= cfg.breakfast_start_tod_s && tod < cfg.breakfast_end_tod_s;
  };
  out.ate_breakfast = std::any_of(day.meals.begin(), day.meals.end(), starts_in_breakfast) ||
                      std::any_of(day.snacks.begin(), day.snacks.end(), starts_in_breakfast);

  std::vector<double> first_tods;
  for (const DayRecord& h : history) {
    h.validate();
    if (auto tod = first_event_tod(h)) first_tods.push_back(*tod);
  }
  if (auto tod = first_event_tod(day)) first_tods.push_back(*tod);
  if (!history.empty() && first_tods.size() >= 2) {
    double mean = 0.0;
    for (double t : first_tods) mean += t;
    mean /= static_cast<double>(first_tods.size());
    double var = 0.0;
    for (double t : first_tods) var += (t - mean) * (t - mean);
    var /= static_cast<double>(first_tods.size());
    out.schedule_consistency_min = std::sqrt(var) / 60.0;
    out.consistency_defined = true;
  }
  return out;
}

EpisodeKind classify_episode(const MealRecord& e, const IndicatorConfig& cfg) {
  e.validate();
  cfg.validate();
  const bool short_enough = e.interval.duration() <= cfg.snack_max_duration_s;
  const bool few_bites = e.bites.size() <= static_cast<std::size_t>(cfg.snack_max_bites);
  return (short_enough && few_bites) ? EpisodeKind::snack : EpisodeKind::meal;
}

}  // namespace intake
