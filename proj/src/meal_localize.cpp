#include "intake/meal_localize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace intake {

void MealLocalizeConfig::validate() const {
  if (!(density_window_s > 0.0) || density_threshold < 1 || !(merge_gap_s > 0.0) ||
      !(min_meal_s > 0.0))
    throw std::invalid_argument("MealLocalizeConfig: all parameters must be positive");
}

IntervalSet localize_meals(const EventSet& bites, const MealLocalizeConfig& cfg) {
  cfg.validate();
  const auto& t = bites.times();
  const auto k = static_cast<std::size_t>(cfg.density_threshold);
  if (t.size() < k) return IntervalSet{};

  // Candidate regions: spans of k consecutive bites that fit in one density
  // window, unioned where they overlap or touch.
  struct Region {
    double start;
    double end;
  };
  std::vector<Region> regions;
  for (std::size_t i = 0; i + k - 1 < t.size(); ++i) {
    const double lo = t[i];
    const double hi = t[i + k - 1];
    if (hi - lo > cfg.density_window_s) continue;
    if (!regions.empty() && lo <= regions.back().end)
      regions.back().end = std::max(regions.back().end, hi);
    else
      regions.push_back({lo, hi});
  }

  // Merge adjacent regions until no gap <= merge_gap_s remains.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Region> merged;
    for (const Region& r : regions) {
      if (!merged.empty() && r.start - merged.back().end <= cfg.merge_gap_s) {
        merged.back().end = std::max(merged.back().end, r.end);
        changed = true;
      } else {
        merged.push_back(r);
      }
    }
    regions = std::move(merged);
  }

  std::vector<LabeledInterval> out;
  for (const Region& r : regions)
    if (r.end - r.start >= cfg.min_meal_s)
      out.push_back(LabeledInterval{r.start, r.end, IntervalLabel::meal});
  return IntervalSet(std::move(out));
}

void DbscanConfig::validate() const {
  if (!(eps_s > 0.0)) throw std::invalid_argument("DbscanConfig: eps_s must be > 0");
  if (min_pts < 1) throw std::invalid_argument("DbscanConfig: min_pts must be >= 1");
}

IntervalSet dbscan_1d(const EventSet& bites, const DbscanConfig& cfg) {
  cfg.validate();
  const auto& t = bites.times();
  const std::size_t n = t.size();
  if (n == 0) return IntervalSet{};

  // Neighborhoods on sorted 1-D data are contiguous index ranges.
  auto range_of = [&](std::size_t i) {
    const auto lo = std::lower_bound(t.begin(), t.end(), t[i] - cfg.eps_s) - t.begin();
    const auto hi = std::upper_bound(t.begin(), t.end(), t[i] + cfg.eps_s) - t.begin();
    return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(lo),
                                               static_cast<std::size_t>(hi));
  };
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = range_of(i);
    core[i] = hi - lo >= static_cast<std::size_t>(cfg.min_pts);
  }

  // Grow clusters from unvisited core points; border points join but do not
  // expand.
  std::vector<int> cluster(n, -1);
  int next_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || cluster[i] >= 0) continue;
    const int id = next_cluster++;
    std::deque<std::size_t> frontier{i};
    cluster[i] = id;
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      if (!core[p]) continue;
      const auto [lo, hi] = range_of(p);
      for (std::size_t q = lo; q < hi; ++q) {
        if (cluster[q] >= 0) continue;
        cluster[q] = id;
        frontier.push_back(q);
      }
    }
  }

  std::vector<double> lo_of(static_cast<std::size_t>(next_cluster),
                            std::numeric_limits<double>::infinity());
  std::vector<double> hi_of(static_cast<std::size_t>(next_cluster),
                            -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] < 0) continue;
    const auto id = static_cast<std::size_t>(cluster[i]);
    lo_of[id] = std::min(lo_of[id], t[i]);
    hi_of[id] = std::max(hi_of[id], t[i]);
  }
  std::vector<LabeledInterval> out;
  for (std::size_t id = 0; id < lo_of.size(); ++id)
    if (lo_of[id] < hi_of[id])
      out.push_back(LabeledInterval{lo_of[id], hi_of[id], IntervalLabel::meal});
  return IntervalSet(std::move(out));
}

void FsmConfig::validate() const {
  if (!(variance_window_s > 0.0))
    throw std::invalid_argument("FsmConfig: variance_window_s must be > 0");
  if (!(enter_threshold > 0.0) || !(exit_threshold > 0.0))
    throw std::invalid_argument("FsmConfig: thresholds must be > 0");
  if (enter_threshold > exit_threshold)
    throw std::invalid_argument("FsmConfig: enter_threshold must not exceed exit_threshold");
  if (roll_axis < 0 || roll_axis > 2)
    throw std::invalid_argument("FsmConfig: roll_axis must be 0, 1 or 2");
}

IntervalSet fsm_segmentation(const InertialRecording& rec, const FsmConfig& cfg) {
  cfg.validate();
  const std::size_t n = rec.size();
  std::vector<double> roll(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& g = rec.gyro()[i];
    roll[i] = cfg.roll_axis == 0 ? g.x : (cfg.roll_axis == 1 ? g.y : g.z);
  }

  // Centered rolling variance via prefix sums; edge windows are clamped.
  std::vector<double> sum(n + 1, 0.0), sumsq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + roll[i];
    sumsq[i + 1] = sumsq[i] + roll[i] * roll[i];
  }
  const auto half = static_cast<std::ptrdiff_t>(
      std::max<long long>(1, std::llround(cfg.variance_window_s * rec.rate() / 2.0)));
  auto variance_at = [&](std::size_t i) {
    const auto lo = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half));
    const auto hi = std::min(n, i + static_cast<std::size_t>(half) + 1);
    const double m = static_cast<double>(hi - lo);
    const double mean = (sum[hi] - sum[lo]) / m;
    return std::max(0.0, (sumsq[hi] - sumsq[lo]) / m - mean * mean);
  };

  std::vector<LabeledInterval> out;
  bool eating = false;
  double opened = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double var = variance_at(i);
    if (!eating && var < cfg.enter_threshold) {
      eating = true;
      opened = rec.time_at(i);
    } else if (eating && var > cfg.exit_threshold) {
      eating = false;
      const double close = rec.time_at(i);
      if (close > opened) out.push_back(LabeledInterval{opened, close, IntervalLabel::meal});
    }
  }
  if (eating) out.push_back(LabeledInterval{opened, rec.end_time(), IntervalLabel::meal});
  return IntervalSet(std::move(out));
}

}  // namespace intake
