// Acceptance suite: one check per release criterion, one [PASS]/[FAIL] line
// each. argv[1] must point at the intake CLI binary (the last criterion runs
// the full pipeline through it). Exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "intake/bite_detect.hpp"
#include "intake/chew_detect.hpp"
#include "intake/evaluation.hpp"
#include "intake/io.hpp"
#include "intake/meal_localize.hpp"
#include "intake/preprocess.hpp"
#include "intake/synth.hpp"
#include "oracles.hpp"

using namespace intake;
namespace fs = std::filesystem;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& message) {
    if (!ok) failures.push_back(message);
  }

  void near(double got, double want, double tolerance, const std::string& label) {
    if (!(std::abs(got - want) <= tolerance)) {
      std::ostringstream os;
      os << label << ": got " << got << ", want " << want << " +/- " << tolerance;
      failures.push_back(os.str());
    }
  }
};

std::string g_cli_path;

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

// ---- criterion 1: Table-level bite-count arithmetic ----

void criterion_metric_arithmetic(Checker& c) {
  struct Row {
    double tp, fp, fn;
    double prec, rec, f1;
  };
  // Reference rows: strict counts, then the matching relaxed counts.
  const std::vector<Row> rows = {
      {1231, 102, 101, 0.923, 0.924, 0.923},      {1237, 96, 95, 0.927, 0.928, 0.928},
      {1221.5, 228.4, 110.5, 0.842, 0.917, 0.878}, {1267.6, 182.3, 64.4, 0.874, 0.951, 0.911},
      {1241.8, 144.5, 90.2, 0.895, 0.932, 0.913},  {1263.4, 122.9, 68.6, 0.911, 0.948, 0.929},
      {944, 431, 388, 0.686, 0.708, 0.697},        {1102, 233, 230, 0.825, 0.827, 0.826},
      {707, 794, 625, 0.471, 0.530, 0.499},        {1190, 311, 142, 0.792, 0.893, 0.840},
      {772, 746, 560, 0.508, 0.579, 0.541},        {1214, 304, 118, 0.799, 0.911, 0.851},
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    const MetricReport m = metrics(BiteEvalResult{row.tp, row.fp, row.fn});
    const std::string tag = "row " + std::to_string(i);
    c.near(m.precision, row.prec, 1e-3, tag + " precision");
    c.near(m.recall, row.rec, 1e-3, tag + " recall");
    c.near(m.f1, row.f1, 1e-3, tag + " f1");
  }
}

// ---- criterion 2: weighted accuracy and weight factor ----

void criterion_weighted_accuracy(Checker& c) {
  const auto balanced = [](double recall, double specificity) {
    IntervalEvalResult r;
    r.tp_s = recall;
    r.fn_s = 1.0 - recall;
    r.tn_s = specificity;
    r.fp_s = 1.0 - specificity;
    return metrics(r).weighted_accuracy;
  };
  c.near(balanced(0.919, 0.990), 0.953, 5e-3, "free-living LOSO weighted accuracy");
  c.near(balanced(0.937, 0.992), 0.964, 5e-3, "free-living held-out weighted accuracy");
  c.near(balanced(0.710, 0.934), 0.825, 5e-3, "meals-only weighted accuracy");
  c.near(balanced(0.633, 0.939), 0.788, 5e-3, "meals-and-snacks weighted accuracy");

  IntervalEvalResult imbalance;
  imbalance.tp_s = 5.42;
  imbalance.tn_s = 77.32 - 5.42;
  const double wf = metrics(imbalance).weight_factor;
  c.near(wf, 77.32 / 5.42, 1e-9, "weight factor exact ratio");
  c.require(std::floor(wf * 10.0) / 10.0 == 14.2, "weight factor prints as 14.2 at one decimal");
}

// ---- criteria 3 and 4: strict oracle equivalence and relaxed dominance ----

void criterion_strict_oracle(Checker& c, std::vector<oracle::BiteInstance>& instances) {
  std::mt19937_64 rng(2026);
  instances.clear();
  instances.reserve(1000);
  for (int i = 0; i < 1000; ++i) instances.push_back(oracle::random_bite_instance(rng));
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto strict = strict_bite_eval(instances[i].gt, instances[i].det);
    const auto naive = oracle::strict_naive(instances[i].gt, instances[i].det);
    c.require(strict.tp == naive.tp && strict.fp == naive.fp && strict.fn == naive.fn,
              "strict mismatch vs brute force on instance " + std::to_string(i));
    c.require(strict.tp + strict.fn == static_cast<double>(instances[i].gt.size()),
              "tp+fn != |gt| on instance " + std::to_string(i));
    if (!c.failures.empty() && c.failures.size() > 5) return;
  }
}

void criterion_relaxed_dominance(Checker& c, const std::vector<oracle::BiteInstance>& instances) {
  int strict_inequality = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto strict = strict_bite_eval(instances[i].gt, instances[i].det);
    const auto relaxed = relaxed_bite_eval(instances[i].gt, instances[i].det);
    c.require(relaxed.tp >= strict.tp, "tp dominance violated on instance " + std::to_string(i));
    c.require(relaxed.fp <= strict.fp, "fp dominance violated on instance " + std::to_string(i));
    c.require(relaxed.fn <= strict.fn, "fn dominance violated on instance " + std::to_string(i));
    if (relaxed.tp > strict.tp || relaxed.fp < strict.fp || relaxed.fn < strict.fn)
      ++strict_inequality;
    if (c.failures.size() > 5) return;
  }
  c.require(strict_inequality >= 1, "no instance exercised a strict inequality");
}

// ---- criterion 5: meal localization rules ----

void criterion_meal_rules(Checker& c) {
  const MealLocalizeConfig cfg;

  // Hand-constructed examples: merge across a 50 s gap, reject short regions.
  {
    MealLocalizeConfig tight = cfg;
    tight.density_window_s = 30.0;
    std::vector<double> bites;
    for (double t = 0; t <= 100.0; t += 25.0) bites.push_back(t);
    for (double t = 150; t <= 400.0; t += 25.0) bites.push_back(t);
    const auto merged = localize_meals(EventSet(bites), tight);
    c.require(merged.size() == 1, "regions 50 s apart must merge");
    if (merged.size() == 1) {
      c.require(merged.intervals()[0].start == 0.0 && merged.intervals()[0].end == 400.0,
                "merged region must span (0,400)");
    }

    std::vector<double> shorts;
    for (double t = 0; t <= 100.0; t += 25.0) shorts.push_back(t);
    for (double t = 500; t <= 650.0; t += 25.0) shorts.push_back(t);
    c.require(localize_meals(EventSet(shorts), tight).empty(),
              "regions shorter than 180 s must be rejected");
  }

  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t count = oracle::uniform_index(rng, 80);
    std::vector<double> times;
    double cursor = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      cursor += std::round(oracle::uniform(rng, 1.0, 400.0) * 1024.0) / 1024.0;
      times.push_back(cursor);
    }
    const EventSet bites(times);
    const IntervalSet meals = localize_meals(bites, cfg);

    for (std::size_t i = 0; i < meals.size(); ++i) {
      c.require(meals.intervals()[i].duration() >= cfg.min_meal_s,
                "meal shorter than min_meal_s in trial " + std::to_string(trial));
      if (i > 0)
        c.require(meals.intervals()[i].start - meals.intervals()[i - 1].end > cfg.merge_gap_s,
                  "inter-meal gap <= merge_gap_s in trial " + std::to_string(trial));
    }

    std::vector<double> inside;
    for (double t : bites.times())
      for (const auto& meal : meals.intervals())
        if (t >= meal.start && t <= meal.end) {
          inside.push_back(t);
          break;
        }
    const IntervalSet again = localize_meals(EventSet(inside), cfg);
    bool same = again.size() == meals.size();
    for (std::size_t i = 0; same && i < meals.size(); ++i)
      same = again.intervals()[i].start == meals.intervals()[i].start &&
             again.intervals()[i].end == meals.intervals()[i].end;
    c.require(same, "idempotence violated in trial " + std::to_string(trial));

    const double shift = 8192.0;
    const IntervalSet moved = localize_meals(bites.shifted(shift), cfg);
    bool equivariant = moved.size() == meals.size();
    for (std::size_t i = 0; equivariant && i < meals.size(); ++i)
      equivariant = moved.intervals()[i].start == meals.intervals()[i].start + shift &&
                    moved.intervals()[i].end == meals.intervals()[i].end + shift;
    c.require(equivariant, "translation equivariance violated in trial " + std::to_string(trial));
    if (c.failures.size() > 5) return;
  }
}

// ---- criterion 6: synthetic end-to-end ----

void criterion_synthetic_end_to_end(Checker& c) {
  SynthConfig scfg;
  scfg.seed = 42;
  scfg.n_meals = 3;
  scfg.walking = true;
  const SynthResult synth = synth_generate(scfg);

  ScorerConfig scorer_cfg;
  scorer_cfg.kind = ScorerKind::oracle_synthetic;
  const OracleScorer scorer(synth.truth.bites, scorer_cfg.micro_window_s);
  const ScoreSeries scores = score_windows(synth.recording, scorer_cfg, scorer);
  const EventSet bites = pick_bite_events(scores, PeakPickConfig{});

  std::size_t recovered = 0;
  for (double truth_t : synth.truth.bites.times()) {
    bool hit = false;
    for (double det_t : bites.times())
      if (std::abs(det_t - truth_t) <= scorer_cfg.micro_window_s) hit = true;
    if (hit) ++recovered;
  }
  c.require(recovered == synth.truth.bites.size(),
            "oracle pipeline recovered " + std::to_string(recovered) + "/" +
                std::to_string(synth.truth.bites.size()) + " bites within 0.2 s");

  const IntervalSet meals = localize_meals(bites, MealLocalizeConfig{});
  const auto interval_result =
      interval_eval(synth.truth.meals, meals, 1.0, 0.0, scfg.duration_s);
  const double jaccard = metrics(interval_result).jaccard;
  c.require(jaccard >= 0.95, "meal localization Jaccard " + std::to_string(jaccard) + " < 0.95");

  const EventSet baseline = roll_threshold_baseline(synth.recording, RollBaselineConfig{});
  const double f1_oracle = metrics(strict_bite_eval(synth.truth.bite_intervals, bites)).f1;
  const double f1_baseline = metrics(strict_bite_eval(synth.truth.bite_intervals, baseline)).f1;
  c.require(f1_baseline < f1_oracle, "baseline F1 " + std::to_string(f1_baseline) +
                                         " not strictly below oracle F1 " +
                                         std::to_string(f1_oracle));
}

// ---- criterion 7: fusion and gating ----

void criterion_fusion_gating(Checker& c) {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + oracle::uniform_index(rng, 40);
    std::vector<double> p(n), a(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = oracle::uniform(rng, 0.0, 1.0);
      a[i] = oracle::uniform(rng, 0.0, 1.0);
    }
    FusionConfig cfg;
    cfg.alpha = oracle::uniform(rng, 0.0, 2.0);
    cfg.a_fusion = oracle::uniform(rng, 0.2, 1.2);
    const ChewMask mask = fuse(ScoreSeries(2.5, 5.0, p), ScoreSeries(2.5, 5.0, a), cfg);
    for (std::size_t i = 0; i < n; ++i) {
      const bool expected = p[i] + cfg.alpha * a[i] > cfg.a_fusion;
      if (static_cast<bool>(mask.values[i]) != expected) {
        c.require(false, "fuse differs from brute force in trial " + std::to_string(trial));
        break;
      }
    }

    FusionConfig louder = cfg;
    louder.alpha = cfg.alpha + oracle::uniform(rng, 0.0, 1.0);
    const ChewMask mask_louder = fuse(ScoreSeries(2.5, 5.0, p), ScoreSeries(2.5, 5.0, a), louder);
    FusionConfig stricter = cfg;
    stricter.a_fusion = cfg.a_fusion + oracle::uniform(rng, 0.0, 1.0);
    const ChewMask mask_stricter =
        fuse(ScoreSeries(2.5, 5.0, p), ScoreSeries(2.5, 5.0, a), stricter);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask.values[i] && !mask_louder.values[i])
        c.require(false, "alpha monotonicity violated in trial " + std::to_string(trial));
      if (mask_stricter.values[i] && !mask.values[i])
        c.require(false, "threshold monotonicity violated in trial " + std::to_string(trial));
    }
    if (c.failures.size() > 5) return;
  }

  for (int trial = 0; trial < 200; ++trial) {
    ChewMask mask;
    mask.start_time = 0.5;
    mask.step = 1.0;
    const std::size_t n = 1 + oracle::uniform_index(rng, 60);
    for (std::size_t i = 0; i < n; ++i)
      mask.values.push_back(static_cast<std::uint8_t>(oracle::uniform01(rng) < 0.5));
    const IntervalSet gates(oracle::random_grid_intervals(rng, 5));
    const ChewMask gated = apply_gate(mask, gates);
    for (std::size_t i = 0; i < n; ++i)
      if (gated.values[i] && !mask.values[i]) {
        c.require(false, "gate dominance violated in trial " + std::to_string(trial));
        break;
      }
  }

  // The worked late-fusion example: 0.4 + 1 * 0.3 > 0.5 means chewing.
  FusionConfig worked;
  worked.alpha = 1.0;
  worked.a_fusion = 0.5;
  const ChewMask example =
      fuse(ScoreSeries(2.5, 5.0, {0.4}), ScoreSeries(2.5, 5.0, {0.3}), worked);
  c.require(example.values.size() == 1 && example.values[0] == 1,
            "worked fusion example must decide chewing");
}

// ---- criterion 8: numerics ----

void criterion_numerics(Checker& c) {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    const double rate = 50.0;
    std::vector<double> window(250);
    for (double& v : window) v = oracle::uniform(rng, -2.0, 2.0);
    const auto got = ppg_features(window, rate);
    const auto expected = oracle::dft_band_energies(window, rate);
    for (std::size_t i = 0; i < got.size(); ++i) {
      const double scale = std::max(1e-12, std::abs(expected[i]));
      if (std::abs(got[i] - expected[i]) / scale > 1e-6) {
        c.require(false, "band energy " + std::to_string(i) + " off by more than 1e-6 relative");
        break;
      }
    }
    if (c.failures.size() > 5) break;
  }

  std::vector<double> line(256);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 0.01 * static_cast<double>(i);
  const double fd = higuchi_fractal_dimension(line);
  c.require(fd >= 0.95 && fd <= 1.05,
            "Higuchi dimension of a line is " + std::to_string(fd) + ", outside [0.95, 1.05]");

  // DC rejection >= 40 dB.
  {
    const double rate = 100.0;
    const auto n = static_cast<std::size_t>(rate * 20.0);
    std::vector<Vec3> accel(n, Vec3{0.0, 0.0, 9.81});
    const InertialRecording rec("dc", 0.0, rate, accel, std::vector<Vec3>(n));
    const auto filtered = remove_gravity(rec, FilterSpec{});
    double peak = 0.0;
    for (std::size_t i = n / 3; i < 2 * n / 3; ++i)
      peak = std::max(peak, std::abs(filtered.accel()[i].z));
    const double rejection_db = 20.0 * std::log10(9.81 / std::max(peak, 1e-300));
    c.require(rejection_db >= 40.0,
              "DC rejection " + std::to_string(rejection_db) + " dB below 40 dB");
  }

  // 5 Hz passband ripple <= 5%.
  {
    const double rate = 100.0;
    const auto n = static_cast<std::size_t>(rate * 20.0);
    std::vector<Vec3> accel(n);
    for (std::size_t i = 0; i < n; ++i)
      accel[i].z = std::sin(2.0 * std::numbers::pi * 5.0 * static_cast<double>(i) / rate);
    const InertialRecording rec("tone", 0.0, rate, accel, std::vector<Vec3>(n));
    const auto filtered = remove_gravity(rec, FilterSpec{});
    double peak = 0.0;
    for (std::size_t i = n / 3; i < 2 * n / 3; ++i)
      peak = std::max(peak, std::abs(filtered.accel()[i].z));
    c.require(std::abs(peak - 1.0) <= 0.05,
              "5 Hz amplitude " + std::to_string(peak) + " deviates over 5%");
  }
}

// ---- criterion 9: aggregation semantics ----

void criterion_aggregation(Checker& c) {
  // Subject A: tp=9 fp=1 fn=1 -> P=0.9, R=0.9, F1=0.9.
  // Subject B: tp=0 fp=0 fn=5 -> F1=0 (degenerate).
  // Macro F1 = (0.9 + 0) / 2 = 0.45.
  // Micro: tp=9 fp=1 fn=6 -> P=0.9, R=0.6, F1 = 2*0.54/1.5 = 0.72.
  const std::vector<BiteEvalResult> subjects{{9, 1, 1}, {0, 0, 5}};
  const MetricReport macro = aggregate(subjects, AggregateMode::loso_macro);
  const MetricReport micro = aggregate(subjects, AggregateMode::cumulative_micro);
  c.near(macro.f1, 0.45, 1e-12, "macro F1 hand value");
  c.near(micro.f1, 0.72, 1e-12, "micro F1 hand value");
  c.require(macro.f1 < micro.f1,
            "macro F1 must fall below micro F1 on imbalanced per-subject positives");
}

// ---- criterion 10: round-trips and the CLI smoke pipeline ----

void criterion_roundtrips_and_cli(Checker& c) {
  const fs::path dir =
      fs::temp_directory_path() / ("intake_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };

  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 1000 && c.failures.size() <= 5; ++trial) {
    const int kind = trial % 3;
    const fs::path a = dir / "rt_a";
    const fs::path b = dir / "rt_b";
    if (kind == 0) {
      std::vector<double> times;
      double cursor = 0.0;
      const std::size_t count = oracle::uniform_index(rng, 50);
      for (std::size_t i = 0; i < count; ++i) {
        cursor += oracle::uniform(rng, 0.001, 20.0);
        times.push_back(cursor);
      }
      write_events(a, EventSet(times), "s");
      write_events(b, read_events(a), "s");
    } else if (kind == 1) {
      write_intervals(a, IntervalSet(oracle::random_grid_intervals(rng, 8)), "s");
      write_intervals(b, read_intervals(a), "s");
    } else {
      const std::size_t count = oracle::uniform_index(rng, 50);
      std::vector<double> values(count);
      for (double& v : values) v = oracle::uniform(rng, -5.0, 5.0);
      write_series_csv(a, ScoreSeries(oracle::uniform(rng, 0, 50), oracle::uniform(rng, 0.01, 2.0),
                                      values),
                       "s");
      write_series_csv(b, read_series_csv(a), "s");
    }
    if (slurp(a) != slurp(b))
      c.require(false, "round-trip mismatch on trial " + std::to_string(trial));
  }

  // End-to-end CLI pipeline on a seeded synthetic day.
  const fs::path config = dir / "config.json";
  {
    std::ofstream out(config);
    out << "{\n"
           "  \"scorer\": {\"kind\": \"oracle_synthetic\"},\n"
           "  \"synth\": {\"seed\": 42, \"n_meals\": 3, \"confounders\": [\"walking\"]}\n"
           "}\n";
  }
  const std::string q = "\"" + g_cli_path + "\"";
  const std::string cfg_arg = " --config \"" + config.string() + "\"";
  const fs::path synth_dir = dir / "synth";
  const fs::path detect_dir = dir / "detect";
  const fs::path eval_bites_dir = dir / "eval_bites";
  const fs::path eval_meals_dir = dir / "eval_meals";
  const fs::path indicators_dir = dir / "indicators";

  struct Step {
    std::string name;
    std::string command;
  };
  const std::vector<Step> steps = {
      {"synth", q + " synth" + cfg_arg + " --output \"" + synth_dir.string() + "\""},
      {"detect-bites", q + " detect-bites" + cfg_arg + " --input \"" +
                           (synth_dir / "recording.csv").string() + "\" --truth-bites \"" +
                           (synth_dir / "truth_bites.events").string() + "\" --output \"" +
                           detect_dir.string() + "\""},
      {"detect-meals", q + " detect-meals" + cfg_arg + " --input \"" +
                           (detect_dir / "recording.bites.events").string() + "\" --output \"" +
                           detect_dir.string() + "\""},
      {"evaluate bites", q + " evaluate" + cfg_arg + " --task bites --scheme strict --gt \"" +
                             (synth_dir / "truth_bite_intervals.intervals").string() +
                             "\" --det \"" + (detect_dir / "recording.bites.events").string() +
                             "\" --output \"" + eval_bites_dir.string() + "\""},
      {"evaluate meals", q + " evaluate" + cfg_arg + " --task intervals --span 0,14400 --gt \"" +
                             (synth_dir / "truth_meals.intervals").string() + "\" --det \"" +
                             (detect_dir / "recording.meals.intervals").string() +
                             "\" --output \"" + eval_meals_dir.string() + "\""},
      {"indicators", q + " indicators" + cfg_arg + " --episodes \"" +
                         (detect_dir / "recording.meals.intervals").string() + "\" --bites \"" +
                         (detect_dir / "recording.bites.events").string() + "\" --output \"" +
                         indicators_dir.string() + "\""},
  };
  for (const Step& step : steps) {
    const int code = run_command(step.command + " > /dev/null 2>&1");
    c.require(code == 0, "CLI step '" + step.name + "' exited with " + std::to_string(code));
    if (code != 0) {
      fs::remove_all(dir);
      return;
    }
  }

  const MetricReport bite_report = read_metrics(eval_bites_dir / "metrics.txt");
  c.require(bite_report.f1 == 1.0, "smoke pipeline strict bite F1 must be 1.0, got " +
                                       std::to_string(bite_report.f1));
  const MetricReport meal_report = read_metrics(eval_meals_dir / "metrics.txt");
  c.require(meal_report.jaccard >= 0.95, "smoke pipeline meal Jaccard " +
                                             std::to_string(meal_report.jaccard) + " < 0.95");
  c.require(!meal_report.is_degenerate("precision") && !meal_report.is_degenerate("recall") &&
                !meal_report.is_degenerate("specificity") && !meal_report.is_degenerate("jaccard"),
            "smoke pipeline metrics must be non-degenerate");
  c.require(fs::exists(indicators_dir / "indicators.txt"), "indicators.txt missing");
  const std::string indicators_text = slurp(indicators_dir / "indicators.txt");
  c.require(indicators_text.find("episode start=") != std::string::npos,
            "indicators.txt lacks episode rows");
  c.require(indicators_text.find("day date=") != std::string::npos,
            "indicators.txt lacks day rows");

  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: intake_acceptance <path-to-intake-cli>\n";
    return 2;
  }
  g_cli_path = argv[1];

  struct Criterion {
    std::string name;
    double budget_s;
    std::function<void(Checker&)> run;
  };

  std::vector<oracle::BiteInstance> shared_instances;
  const std::vector<Criterion> criteria = {
      {"1. bite-count metric arithmetic on reference rows", 1.0, criterion_metric_arithmetic},
      {"2. weighted accuracy derivation and weight factor", 1.0, criterion_weighted_accuracy},
      {"3. strict scheme equals brute force on 1000 instances", 10.0,
       [&](Checker& c) { criterion_strict_oracle(c, shared_instances); }},
      {"4. relaxed scheme dominates strict on the same instances", 10.0,
       [&](Checker& c) { criterion_relaxed_dominance(c, shared_instances); }},
      {"5. meal localization rules and properties", 10.0, criterion_meal_rules},
      {"6. synthetic end-to-end with confounders", 30.0, criterion_synthetic_end_to_end},
      {"7. fusion equivalence, monotonicity, gate dominance", 10.0, criterion_fusion_gating},
      {"8. spectral, fractal and filter numerics", 10.0, criterion_numerics},
      {"9. macro vs micro aggregation semantics", 1.0, criterion_aggregation},
      {"10. file round-trips and CLI smoke pipeline", 60.0, criterion_roundtrips_and_cli},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_s)
      checker.require(false, "runtime " + std::to_string(seconds) + " s exceeds " +
                                 std::to_string(criterion.budget_s) + " s budget");
    const bool passed = checker.failures.empty();
    std::cout << (passed ? "[PASS] " : "[FAIL] ") << criterion.name << " ("
              << static_cast<int>(seconds * 1000.0) << " ms)\n";
    for (const std::string& failure : checker.failures) std::cout << "       - " << failure << "\n";
    if (!passed) ++failures;
  }

  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
