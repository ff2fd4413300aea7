#include <doctest.h>

#include <limits>
#include <random>

#include "intake/signal.hpp"
#include "oracles.hpp"

using namespace intake;

TEST_SUITE_BEGIN("signal");

TEST_CASE("sliding_windows tiles and identity cases") {
  const auto tiled = sliding_windows(10, 5, 5);
  REQUIRE(tiled.size() == 2);
  CHECK(tiled[0].start == 0);
  CHECK(tiled[1].start == 5);

  const auto identity = sliding_windows(10, 10, 1);
  REQUIRE(identity.size() == 1);
  CHECK(identity[0].start == 0);
  CHECK(identity[0].length == 10);
}

TEST_CASE("sliding_windows matches an index-by-index scan") {
  const auto windows = sliding_windows(100, 20, 7);
  CHECK(windows.size() == 12);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = oracle::uniform_index(rng, 200);
    const std::size_t wl = 1 + oracle::uniform_index(rng, 30);
    const std::size_t stride = 1 + oracle::uniform_index(rng, 10);
    const auto got = sliding_windows(len, wl, stride);
    const auto expected = oracle::window_starts_scan(len, wl, stride);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].start == expected[i]);
      CHECK(got[i].start + got[i].length <= len);
      if (i > 0) CHECK(got[i].start - got[i - 1].start == stride);
    }
  }
}

TEST_CASE("sliding_windows rejects degenerate parameters, short series is empty") {
  CHECK_THROWS_AS(sliding_windows(10, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sliding_windows(10, 5, 0), std::invalid_argument);
  CHECK(sliding_windows(4, 5, 1).empty());
}

TEST_CASE("interval_union_duration trivial cases") {
  CHECK(interval_union_duration(IntervalSet{}) == 0.0);
  const IntervalSet two({{0, 10, IntervalLabel::other}, {20, 30, IntervalLabel::other}});
  CHECK(interval_union_duration(two) == doctest::Approx(20.0));
}

TEST_CASE("interval measures match a 1 ms rasterization") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a_raw = oracle::random_grid_intervals(rng, 6);
    const auto b_raw = oracle::random_grid_intervals(rng, 6);
    const IntervalSet a(a_raw);
    const IntervalSet b(b_raw);
    double hi = 1.0;
    for (const auto& iv : a_raw) hi = std::max(hi, iv.end);
    for (const auto& iv : b_raw) hi = std::max(hi, iv.end);
    hi += 0.5;
    const double step = 1e-3;

    CHECK(oracle::near(interval_union_duration(a),
                       oracle::rasterized_measure(a_raw, 0.0, hi, step), step));

    const IntervalSet inter = interval_intersection(a, b);
    CHECK(oracle::near(interval_union_duration(inter),
                       oracle::rasterized_intersection(a_raw, b_raw, 0.0, hi, step), step));

    // Inclusion-exclusion union against the rasterized union.
    const double union_ie = interval_union_duration(a) + interval_union_duration(b) -
                            interval_union_duration(inter);
    CHECK(oracle::near(union_ie, oracle::rasterized_union(a_raw, b_raw, 0.0, hi, step), step));
  }
}

TEST_CASE("interval_intersection identity and half overlap") {
  const IntervalSet a({{0, 100, IntervalLabel::meal}});
  const auto same = interval_intersection(a, a);
  REQUIRE(same.size() == 1);
  CHECK(same.intervals()[0].start == 0.0);
  CHECK(same.intervals()[0].end == 100.0);
  CHECK(same.intervals()[0].label == IntervalLabel::other);

  const IntervalSet b({{50, 150, IntervalLabel::meal}});
  const auto half = interval_intersection(a, b);
  REQUIRE(half.size() == 1);
  CHECK(half.intervals()[0].start == 50.0);
  CHECK(half.intervals()[0].end == 100.0);
}

TEST_CASE("constructors reject invalid data") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();

  CHECK_THROWS_AS(EventSet({1.0, nan}), std::invalid_argument);
  CHECK_THROWS_AS(EventSet({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSet({{0, 0, IntervalLabel::meal}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSet({{5, 2, IntervalLabel::meal}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSet({{0, 10, IntervalLabel::meal}, {5, 15, IntervalLabel::meal}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(IntervalSet({{0, inf, IntervalLabel::meal}}), std::invalid_argument);

  CHECK_THROWS_AS(ScoreSeries(0.0, 0.0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ScoreSeries(0.0, 1.0, {nan}), std::invalid_argument);

  const std::vector<Vec3> ok(4);
  std::vector<Vec3> bad(4);
  bad[2].y = nan;
  CHECK_THROWS_AS(InertialRecording("s", 0.0, 50.0, ok, bad), std::invalid_argument);
  CHECK_THROWS_AS(InertialRecording("s", 0.0, 0.0, ok, ok), std::invalid_argument);
  CHECK_THROWS_AS(InertialRecording("s", 0.0, 50.0, ok, std::vector<Vec3>(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(InertialRecording("s", 0.0, 50.0, {}, {}), std::invalid_argument);
}

TEST_CASE("EventSet sorts its input") {
  const EventSet events({3.0, 1.0, 2.0});
  CHECK(events.times() == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("IntervalSet merges touching same-label intervals only") {
  const IntervalSet merged({{0, 5, IntervalLabel::meal}, {5, 9, IntervalLabel::meal}});
  REQUIRE(merged.size() == 1);
  CHECK(merged.intervals()[0].end == 9.0);

  const IntervalSet kept({{0, 5, IntervalLabel::meal}, {5, 9, IntervalLabel::snack}});
  CHECK(kept.size() == 2);
}

TEST_CASE("ScoreSeries probability check") {
  const ScoreSeries probs(0.0, 1.0, {0.0, 0.5, 1.0});
  CHECK_NOTHROW(probs.require_probabilities());
  const ScoreSeries raw(0.0, 1.0, {-0.1, 2.0});
  CHECK_THROWS_AS(raw.require_probabilities(), std::invalid_argument);
}

TEST_SUITE_END();
