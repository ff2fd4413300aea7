#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "intake/cli.hpp"
#include "intake/io.hpp"
#include "intake/synth.hpp"

using namespace intake;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("intake_pipe_test_" + std::to_string(++counter) + "_" +
                                        std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("cli_pipelines");

TEST_CASE("synth output is byte-identical across runs") {
  TempDir dir;
  const fs::path cfg = dir.path / "cfg.json";
  spit(cfg, "{\"synth\": {\"seed\": 7, \"duration_s\": 7200, \"n_meals\": 2}}");
  const fs::path a = dir.path / "a";
  const fs::path b = dir.path / "b";
  REQUIRE(run_cli({"synth", "--config", cfg.string(), "--output", a.string()}) == 0);
  REQUIRE(run_cli({"synth", "--config", cfg.string(), "--output", b.string()}) == 0);
  for (const char* name : {"recording.csv", "truth_bites.events", "truth_meals.intervals",
                           "truth_activity.intervals"})
    CHECK(slurp(a / name) == slurp(b / name));

  // --seed overrides the config.
  const fs::path c = dir.path / "c";
  REQUIRE(run_cli({"synth", "--config", cfg.string(), "--seed", "8", "--output", c.string()}) == 0);
  CHECK(slurp(a / "recording.csv") != slurp(c / "recording.csv"));
}

TEST_CASE("roll-baseline scorer kind detects synthetic bites end to end") {
  TempDir dir;
  const fs::path cfg = dir.path / "cfg.json";
  spit(cfg,
       "{\"scorer\": {\"kind\": \"roll_threshold_baseline\"},\n"
       " \"synth\": {\"seed\": 11, \"duration_s\": 7200, \"n_meals\": 2, \"confounders\": []}}");
  const fs::path synth_dir = dir.path / "synth";
  REQUIRE(run_cli({"synth", "--config", cfg.string(), "--output", synth_dir.string()}) == 0);
  const fs::path out = dir.path / "out";
  REQUIRE(run_cli({"detect-bites", "--config", cfg.string(), "--input",
                   (synth_dir / "recording.csv").string(), "--output", out.string()}) == 0);
  const auto detected = read_events(out / "recording.bites.events");
  const auto truth = read_events(synth_dir / "truth_bites.events");
  // Without confounders the baseline finds every excursion, one event each.
  CHECK(detected.size() == truth.size());
}

TEST_CASE("detect-meals supports dbscan and fsm methods") {
  TempDir dir;
  const fs::path events = dir.path / "bites.events";
  std::string text = "# subject_id=s\n";
  for (double t : {100.0, 160.0, 220.0, 280.0, 340.0, 400.0}) text += "t=" + format_double(t) + "\n";
  for (double t : {3000.0, 3060.0, 3120.0, 3180.0, 3240.0}) text += "t=" + format_double(t) + "\n";
  spit(events, text);

  const fs::path cfg = dir.path / "dbscan.json";
  spit(cfg, "{\"meal\": {\"method\": \"dbscan\"}, \"dbscan\": {\"eps_s\": 90, \"min_pts\": 3}}");
  const fs::path out = dir.path / "out";
  REQUIRE(run_cli({"detect-meals", "--config", cfg.string(), "--input", events.string(),
                   "--output", out.string()}) == 0);
  const auto clusters = read_intervals(out / "bites.meals.intervals");
  REQUIRE(clusters.size() == 2);
  CHECK(clusters.intervals()[0].start == 100.0);
  CHECK(clusters.intervals()[0].end == 400.0);

  // FSM runs on the recording itself: quiet gyro means one long interval.
  const fs::path rec = dir.path / "still.csv";
  std::string csv = "# subject_id=s\n# start=0\n# rate=10\nt,ax,ay,az,gx,gy,gz\n";
  for (int i = 0; i < 1200; ++i)
    csv += format_double(i * 0.1) + ",0,0,9.81,0,0,0\n";
  spit(rec, csv);
  const fs::path fsm_cfg = dir.path / "fsm.json";
  spit(fsm_cfg, "{\"meal\": {\"method\": \"fsm\"}}");
  REQUIRE(run_cli({"detect-meals", "--config", fsm_cfg.string(), "--input", rec.string(),
                   "--output", out.string()}) == 0);
  const auto spans = read_intervals(out / "still.meals.intervals");
  REQUIRE(spans.size() == 1);
  CHECK(spans.intervals()[0].start == 0.0);
  CHECK(spans.intervals()[0].end == doctest::Approx(120.0));
}

TEST_CASE("detect-chews pipeline over raw ppg, audio and accel files") {
  TempDir dir;
  const double rate = 50.0;
  const double audio_rate = 500.0;
  const double total = 120.0;

  // Chewing (2 Hz PPG oscillation + textured audio) during [30, 90).
  std::string ppg_csv = "# start=0\n# step=" + format_double(1.0 / rate) + "\nt,v\n";
  const auto n_ppg = static_cast<std::size_t>(total * rate);
  for (std::size_t i = 0; i < n_ppg; ++i) {
    const double t = static_cast<double>(i) / rate;
    const bool chewing = t >= 30.0 && t < 90.0;
    const double v = chewing ? std::sin(2.0 * std::numbers::pi * 2.0 * t) : 0.01;
    ppg_csv += format_double(t) + "," + format_double(v) + "\n";
  }
  const fs::path ppg = dir.path / "session.ppg.csv";
  spit(ppg, ppg_csv);

  std::string audio_csv = "# start=0\n# step=" + format_double(1.0 / audio_rate) + "\nt,v\n";
  const auto n_audio = static_cast<std::size_t>(total * audio_rate);
  unsigned state = 12345;
  for (std::size_t i = 0; i < n_audio; ++i) {
    const double t = static_cast<double>(i) / audio_rate;
    state = state * 1664525u + 1013904223u;
    const double noise = (static_cast<double>(state >> 8) / 16777216.0 - 0.5);
    const bool chewing = t >= 30.0 && t < 90.0;
    audio_csv += format_double(t) + "," + format_double(chewing ? noise : 0.0) + "\n";
  }
  const fs::path audio = dir.path / "session.audio.csv";
  spit(audio, audio_csv);

  std::string accel_csv = "# start=0\n# rate=" + format_double(rate) + "\nt,x,y,z\n";
  for (std::size_t i = 0; i < n_ppg; ++i) {
    const double t = static_cast<double>(i) / rate;
    // Walking burst right at the end, outside the chewing block.
    const double bounce = (t >= 100.0 && t < 115.0)
                              ? 3.0 * std::sin(2.0 * std::numbers::pi * 2.0 * t)
                              : 0.0;
    accel_csv += format_double(t) + ",0,0," + format_double(9.81 + bounce) + "\n";
  }
  const fs::path accel = dir.path / "session.accel.csv";
  spit(accel, accel_csv);

  // PPG model keys on the chewing-band ratio; audio model on the broadband
  // log-energy lift of the noise.
  const fs::path cfg = dir.path / "cfg.json";
  spit(cfg,
       "{\n"
       " \"ppg_model\": {\"weights\": [0, 0, 0, 0, 6.0], \"bias\": -3.0},\n"
       " \"audio_model\": {\"weights\": [0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0, 0, 0],"
       " \"bias\": 12.0},\n"
       " \"bouts\": {\"chew_gap_s\": 6.0, \"episode_gap_s\": 60.0}\n"
       "}");

  const fs::path out = dir.path / "out";
  REQUIRE(run_cli({"detect-chews", "--config", cfg.string(), "--ppg", ppg.string(), "--audio",
                   audio.string(), "--accel", accel.string(), "--output", out.string()}) == 0);

  const auto episodes = read_intervals(out / "session.episodes.intervals");
  REQUIRE(episodes.size() == 1);
  CHECK(episodes.intervals()[0].start > 20.0);
  CHECK(episodes.intervals()[0].start < 40.0);
  CHECK(episodes.intervals()[0].end > 80.0);
  CHECK(episodes.intervals()[0].end < 100.0);

  const auto activity = read_intervals(out / "session.activity.intervals");
  REQUIRE(activity.size() == 1);
  CHECK(activity.intervals()[0].start > 90.0);

  const auto mask = read_series_csv(out / "session.chew_mask.csv");
  CHECK(mask.size() == static_cast<std::size_t>(total / 5.0));
}

TEST_CASE("detect-chews accepts precomputed audio feature files of any width") {
  TempDir dir;
  // PPG: 2 Hz tone during [20, 60) of an 80 s stream at 40 Hz.
  std::string ppg_csv = "# start=0\n# step=0.025\nt,v\n";
  for (int i = 0; i < 3200; ++i) {
    const double t = i * 0.025;
    const double v = (t >= 20.0 && t < 60.0) ? std::sin(2.0 * std::numbers::pi * 2.0 * t) : 0.01;
    ppg_csv += format_double(t) + "," + format_double(v) + "\n";
  }
  const fs::path ppg = dir.path / "p.csv";
  spit(ppg, ppg_csv);

  // Single-column feature matrix, high over the same block.
  std::string feats_csv = "# start=0.1\n# step=0.2\nt,f0\n";
  for (int i = 0; i < 400; ++i) {
    const double t = 0.1 + i * 0.2;
    feats_csv += format_double(t) + "," + format_double(t >= 20.0 && t < 60.0 ? 5.0 : -5.0) + "\n";
  }
  const fs::path feats = dir.path / "af.csv";
  spit(feats, feats_csv);

  // The threshold sits above either modality alone.
  const fs::path cfg = dir.path / "c.json";
  spit(cfg,
       "{\"ppg_model\": {\"weights\": [0,0,0,0,6.0], \"bias\": -3.0},\n"
       " \"audio_model\": {\"weights\": [1.0], \"bias\": 0.0},\n"
       " \"fusion\": {\"alpha\": 1.0, \"a_fusion\": 1.2}}");

  const fs::path out = dir.path / "out";
  REQUIRE(run_cli({"detect-chews", "--config", cfg.string(), "--ppg", ppg.string(),
                   "--audio-features", feats.string(), "--output", out.string()}) == 0);
  const auto episodes = read_intervals(out / "p.episodes.intervals");
  REQUIRE(episodes.size() == 1);
  CHECK(episodes.intervals()[0].start == doctest::Approx(20.0).epsilon(0.01));
  CHECK(episodes.intervals()[0].end == doctest::Approx(60.0).epsilon(0.01));
}

TEST_CASE("detect-chews gating can silence everything") {
  TempDir dir;
  // Constant high PPG score via precomputed scores; activity covers the span.
  std::string scores_csv = "# start=2.5\n# step=5\nt,v\n";
  for (int i = 0; i < 12; ++i)
    scores_csv += format_double(2.5 + 5.0 * i) + ",0.9\n";
  const fs::path scores = dir.path / "scores.csv";
  spit(scores, scores_csv);

  std::string accel_csv = "# start=0\n# rate=20\nt,x,y,z\n";
  for (int i = 0; i < 1200; ++i) {
    const double t = i * 0.05;
    accel_csv += format_double(t) + ",0,0," +
                 format_double(9.81 + 4.0 * std::sin(2.0 * std::numbers::pi * 2.0 * t)) + "\n";
  }
  const fs::path accel = dir.path / "accel.csv";
  spit(accel, accel_csv);

  const fs::path out = dir.path / "out";
  REQUIRE(run_cli({"detect-chews", "--ppg-scores", scores.string(), "--accel", accel.string(),
                   "--output", out.string()}) == 0);
  const auto mask = read_series_csv(out / "scores.chew_mask.csv");
  double sum = 0.0;
  for (double v : mask.values()) sum += v;
  CHECK(sum == 0.0);  // fully gated
  CHECK(read_intervals(out / "scores.episodes.intervals").empty());
}

TEST_CASE("preprocess writes an aligned gravity-free recording") {
  TempDir dir;
  const fs::path rec = dir.path / "raw.csv";
  std::string csv = "# subject_id=p\n# start=0\n# rate=50\nt,ax,ay,az,gx,gy,gz\n";
  for (int i = 0; i < 1000; ++i) {
    const double t = i * 0.02;
    csv += format_double(t) + ",0,0," +
           format_double(9.81 + std::sin(2.0 * std::numbers::pi * 5.0 * t)) + ",0.2,0,0\n";
  }
  spit(rec, csv);
  const fs::path out = dir.path / "out";
  REQUIRE(run_cli({"preprocess", "--input", rec.string(), "--output", out.string()}) == 0);
  const auto processed = read_inertial_csv(out / "raw.preprocessed.csv");
  CHECK(processed.subject_id() == "p");
  double dc = 0.0;
  for (std::size_t i = processed.size() / 3; i < 2 * processed.size() / 3; ++i)
    dc += processed.accel()[i].z / static_cast<double>(processed.size() / 3);
  CHECK(std::abs(dc) < 1e-2);  // gravity gone
  for (std::size_t i = 0; i < processed.size(); ++i) CHECK(processed.gyro()[i].x == 0.2);

  // A 90-degree z-rotation moves x readings onto y before filtering.
  const fs::path rotated_out = dir.path / "rot";
  REQUIRE(run_cli({"preprocess", "--input", rec.string(), "--output", rotated_out.string(),
                   "--rotate-z", "90"}) == 0);
  const auto rotated = read_inertial_csv(rotated_out / "raw.preprocessed.csv");
  CHECK(rotated.gyro()[0].y == doctest::Approx(0.2));
  CHECK(rotated.gyro()[0].x == doctest::Approx(0.0));
}

TEST_CASE("preprocess honors --workers across multiple inputs") {
  TempDir dir;
  std::vector<std::string> inputs;
  for (int f = 0; f < 3; ++f) {
    std::string csv = "# start=0\n# rate=25\nt,ax,ay,az,gx,gy,gz\n";
    for (int i = 0; i < 300; ++i) {
      const double t = i * 0.04;
      csv += format_double(t) + "," + format_double(0.1 * f) + ",0,9.81,0,0,0\n";
    }
    const fs::path p = dir.path / ("rec" + std::to_string(f) + ".csv");
    spit(p, csv);
    inputs.push_back(p.string());
  }
  const fs::path serial = dir.path / "serial";
  const fs::path parallel = dir.path / "parallel";
  REQUIRE(run_cli({"preprocess", "--input", inputs[0], "--input", inputs[1], "--input", inputs[2],
                   "--output", serial.string()}) == 0);
  REQUIRE(run_cli({"preprocess", "--input", inputs[0], "--input", inputs[1], "--input", inputs[2],
                   "--workers", "3", "--output", parallel.string()}) == 0);
  for (int f = 0; f < 3; ++f) {
    const std::string name = "rec" + std::to_string(f) + ".preprocessed.csv";
    CHECK(slurp(serial / name) == slurp(parallel / name));
  }
}

TEST_CASE("evaluate aggregates multiple subject pairs") {
  TempDir dir;
  const fs::path gt1 = dir.path / "gt1.intervals";
  const fs::path det1 = dir.path / "det1.events";
  const fs::path gt2 = dir.path / "gt2.intervals";
  const fs::path det2 = dir.path / "det2.events";
  // Subject one: perfect. Subject two: all misses.
  spit(gt1, "# subject_id=a\nstart=0 end=10 label=other\nstart=20 end=30 label=other\n");
  spit(det1, "# subject_id=a\nt=5\nt=25\n");
  spit(gt2, "# subject_id=b\nstart=0 end=10 label=other\nstart=20 end=30 label=other\n");
  spit(det2, "# subject_id=b\n");

  const fs::path out_macro = dir.path / "macro";
  REQUIRE(run_cli({"evaluate", "--task", "bites", "--agg", "loso", "--gt", gt1.string(), "--gt",
                   gt2.string(), "--det", det1.string(), "--det", det2.string(), "--output",
                   out_macro.string()}) == 0);
  const auto macro = read_metrics(out_macro / "metrics.txt");
  CHECK(macro.f1 == doctest::Approx(0.5));

  const fs::path out_micro = dir.path / "micro";
  REQUIRE(run_cli({"evaluate", "--task", "bites", "--agg", "cumulative", "--gt", gt1.string(),
                   "--gt", gt2.string(), "--det", det1.string(), "--det", det2.string(),
                   "--output", out_micro.string()}) == 0);
  const auto micro = read_metrics(out_micro / "metrics.txt");
  CHECK(micro.f1 == doctest::Approx(2.0 * 1.0 * 0.5 / 1.5));
}

TEST_SUITE_END();
