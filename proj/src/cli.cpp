#include "intake/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "intake/config.hpp"
#include "intake/io.hpp"

namespace intake {

namespace {

namespace fs = std::filesystem;

// Filename up to the first '.', so derived outputs stay short.
std::string base_stem(const fs::path& path) {
  const std::string name = path.filename().string();
  const std::size_t dot = name.find('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

RunConfig load_config(const std::string& config_path) {
  if (config_path.empty()) return RunConfig{};
  return RunConfig::from_json_file(config_path);
}

void ensure_output_dir(const fs::path& dir) {
  if (dir.empty()) throw std::invalid_argument("missing --output directory");
  fs::create_directories(dir);
}

// Runs fn over every item with at most `workers` concurrent jobs.
void for_each_parallel(const std::vector<std::string>& items, unsigned workers,
                       const std::function<void(const std::string&)>& fn) {
  if (workers <= 1 || items.size() <= 1) {
    for (const auto& item : items) fn(item);
    return;
  }
  std::vector<std::future<void>> jobs;
  std::size_t next = 0;
  while (next < items.size() || !jobs.empty()) {
    while (next < items.size() && jobs.size() < workers) {
      const std::string& item = items[next++];
      jobs.push_back(std::async(std::launch::async, fn, item));
    }
    jobs.front().get();  // rethrows worker errors
    jobs.erase(jobs.begin());
  }
}

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_workers = false) {
  cmd->add_option("--config", opts.config_path, "JSON config file (defaults when omitted)");
  cmd->add_option("--output", opts.output_dir, "output directory")->required();
  if (with_workers) cmd->add_option("--workers", opts.workers, "parallel input files");
}

int cmd_synth(const CommonOpts& opts, std::optional<std::uint64_t> seed) {
  RunConfig cfg = load_config(opts.config_path);
  if (seed) cfg.synth.seed = *seed;
  ensure_output_dir(opts.output_dir);
  const SynthResult result = synth_generate(cfg.synth);
  const fs::path dir(opts.output_dir);
  const std::string& subject = result.recording.subject_id();
  write_inertial_csv(dir / "recording.csv", result.recording);
  write_events(dir / "truth_bites.events", result.truth.bites, subject);
  write_intervals(dir / "truth_bite_intervals.intervals", result.truth.bite_intervals, subject);
  write_intervals(dir / "truth_meals.intervals", result.truth.meals, subject);
  write_intervals(dir / "truth_activity.intervals", result.truth.activity, subject);
  return 0;
}

int cmd_preprocess(const CommonOpts& opts, const std::vector<std::string>& inputs, double rot_z,
                   double rot_x, double rot_y) {
  const RunConfig cfg = load_config(opts.config_path);
  ensure_output_dir(opts.output_dir);
  const bool rotate = rot_z != 0.0 || rot_x != 0.0 || rot_y != 0.0;
  const double deg = 3.14159265358979323846 / 180.0;
  for_each_parallel(inputs, opts.workers, [&](const std::string& input) {
    InertialRecording rec = read_inertial_csv(input);
    if (rotate) {
      const Rotation r =
          Rotation::about_z(rot_z * deg).compose(Rotation::about_x(rot_x * deg)).compose(
              Rotation::about_y(rot_y * deg));
      rec = rotate_frame(rec, r);
    }
    rec = preprocess(rec, cfg.filter);
    write_inertial_csv(fs::path(opts.output_dir) / (base_stem(input) + ".preprocessed.csv"), rec);
  });
  return 0;
}

int cmd_detect_bites(const CommonOpts& opts, const std::vector<std::string>& inputs,
                     const std::string& scores_path, const std::string& truth_path) {
  const RunConfig cfg = load_config(opts.config_path);
  ensure_output_dir(opts.output_dir);
  const fs::path dir(opts.output_dir);

  if (cfg.scorer.kind == ScorerKind::external_scores) {
    if (scores_path.empty())
      throw std::invalid_argument("detect-bites: external_scores scorer needs --scores");
    const ScoreSeries scores = read_series_csv(scores_path);
    scores.require_probabilities();
    const EventSet bites = pick_bite_events(scores, cfg.peaks);
    const auto subject = file_subject_id(scores_path).value_or(base_stem(scores_path));
    write_events(dir / (base_stem(scores_path) + ".bites.events"), bites, subject);
    return 0;
  }

  if (inputs.empty()) throw std::invalid_argument("detect-bites: missing --input recording");
  std::optional<EventSet> truth;
  if (cfg.scorer.kind == ScorerKind::oracle_synthetic) {
    if (truth_path.empty())
      throw std::invalid_argument("detect-bites: oracle_synthetic scorer needs --truth-bites");
    truth = read_events(truth_path);
  }
  for_each_parallel(inputs, opts.workers, [&](const std::string& input) {
    const InertialRecording rec = read_inertial_csv(input);
    const std::string stem = base_stem(input);
    EventSet bites;
    if (cfg.scorer.kind == ScorerKind::roll_threshold_baseline) {
      bites = roll_threshold_baseline(rec, cfg.roll_baseline);
    } else {
      const OracleScorer scorer(*truth, cfg.scorer.micro_window_s);
      const ScoreSeries scores = score_windows(rec, cfg.scorer, scorer);
      write_series_csv(dir / (stem + ".scores.csv"), scores, rec.subject_id());
      bites = pick_bite_events(scores, cfg.peaks);
    }
    write_events(dir / (stem + ".bites.events"), bites, rec.subject_id());
  });
  return 0;
}

int cmd_detect_meals(const CommonOpts& opts, const std::string& input) {
  const RunConfig cfg = load_config(opts.config_path);
  ensure_output_dir(opts.output_dir);
  IntervalSet meals;
  std::string subject;
  if (cfg.meal_method == MealMethod::fsm) {
    const InertialRecording rec = read_inertial_csv(input);
    subject = rec.subject_id();
    meals = fsm_segmentation(rec, cfg.fsm);
  } else {
    const EventSet bites = read_events(input);
    subject = file_subject_id(input).value_or(base_stem(input));
    meals = cfg.meal_method == MealMethod::density ? localize_meals(bites, cfg.meal)
                                                   : dbscan_1d(bites, cfg.dbscan);
  }
  write_intervals(fs::path(opts.output_dir) / (base_stem(input) + ".meals.intervals"), meals,
                  subject);
  return 0;
}

int cmd_detect_chews(const CommonOpts& opts, const std::string& ppg_path,
                     const std::string& audio_path, const std::string& audio_features_path,
                     const std::string& accel_path, const std::string& ppg_scores_path,
                     const std::string& audio_scores_path) {
  RunConfig cfg = load_config(opts.config_path);
  ensure_output_dir(opts.output_dir);
  const fs::path dir(opts.output_dir);

  ChewDetectResult result;
  std::string stem = "chews";
  if (!ppg_scores_path.empty()) {
    // Precomputed per-window scores bypass feature extraction.
    stem = base_stem(ppg_scores_path);
    result.s_ppg = read_series_csv(ppg_scores_path);
    result.s_ppg.require_probabilities();
    if (result.s_ppg.empty()) throw std::invalid_argument("detect-chews: empty PPG score series");
    if (!audio_scores_path.empty()) {
      result.s_audio = read_series_csv(audio_scores_path);
      result.s_audio.require_probabilities();
    } else {
      std::cerr << "detect-chews: no audio scores, forcing alpha=0\n";
      cfg.fusion.alpha = 0.0;
      result.s_audio = ScoreSeries(result.s_ppg.start_time(), result.s_ppg.step(),
                                   std::vector<double>(result.s_ppg.size(), 0.0));
    }
    result.mask = fuse(result.s_ppg, result.s_audio, cfg.fusion);
    if (!accel_path.empty()) {
      result.activity = activity_gate(read_triaxial_csv(accel_path), cfg.gate);
      result.mask = apply_gate(result.mask, result.activity);
    }
    result.aggregate = aggregate_chews(result.mask, cfg.bouts);
  } else if (!ppg_path.empty()) {
    stem = base_stem(ppg_path);
    ChewStreams streams;
    streams.ppg = read_series_csv(ppg_path);
    if (!audio_features_path.empty())
      streams.audio_features = read_feature_matrix_csv(audio_features_path);
    else if (!audio_path.empty())
      streams.audio = read_series_csv(audio_path);
    else
      std::cerr << "detect-chews: no audio input, forcing alpha=0\n";
    if (!accel_path.empty()) streams.accel = read_triaxial_csv(accel_path);
    result = detect_chews(streams, cfg.fusion, cfg.gate, cfg.bouts, cfg.ppg_model, cfg.audio_model);
  } else {
    throw std::invalid_argument("detect-chews: needs --ppg or --ppg-scores");
  }

  std::vector<double> mask_values(result.mask.values.begin(), result.mask.values.end());
  write_series_csv(dir / (stem + ".chew_mask.csv"),
                   ScoreSeries(result.mask.start_time, result.mask.step, std::move(mask_values)));
  write_intervals(dir / (stem + ".bouts.intervals"), result.aggregate.bouts);
  write_intervals(dir / (stem + ".episodes.intervals"), result.aggregate.episodes);
  write_intervals(dir / (stem + ".activity.intervals"), result.activity);
  return 0;
}

void check_subjects(const std::string& gt_path, const std::string& det_path) {
  const auto gt_subject = file_subject_id(gt_path);
  const auto det_subject = file_subject_id(det_path);
  if (gt_subject && det_subject && *gt_subject != *det_subject)
    throw std::invalid_argument("evaluate: subject ID mismatch between " + gt_path + " (" +
                                *gt_subject + ") and " + det_path + " (" + *det_subject + ")");
}

void print_report(std::ostream& out, const MetricReport& m) {
  out << "precision=" << format_double(m.precision) << " recall=" << format_double(m.recall)
      << " specificity=" << format_double(m.specificity) << " f1=" << format_double(m.f1)
      << " accuracy=" << format_double(m.accuracy)
      << " weighted_accuracy=" << format_double(m.weighted_accuracy)
      << " jaccard=" << format_double(m.jaccard)
      << " weight_factor=" << format_double(m.weight_factor) << "\n";
}

int cmd_evaluate(const CommonOpts& opts, const std::string& task,
                 const std::vector<std::string>& gt_paths,
                 const std::vector<std::string>& det_paths, const std::string& scheme,
                 const std::string& agg_mode, const std::string& span_text, double grid_override) {
  const RunConfig cfg = load_config(opts.config_path);
  ensure_output_dir(opts.output_dir);
  if (gt_paths.size() != det_paths.size() || gt_paths.empty())
    throw std::invalid_argument("evaluate: needs matching --gt and --det lists");
  const AggregateMode mode =
      agg_mode == "cumulative" ? AggregateMode::cumulative_micro : AggregateMode::loso_macro;
  const double grid = grid_override > 0.0 ? grid_override : cfg.grid_step_s;

  MetricReport report;
  if (task == "bites") {
    std::vector<BiteEvalResult> results;
    for (std::size_t i = 0; i < gt_paths.size(); ++i) {
      check_subjects(gt_paths[i], det_paths[i]);
      const IntervalSet gt = read_intervals(gt_paths[i]);
      const EventSet det = read_events(det_paths[i]);
      results.push_back(scheme == "relaxed" ? relaxed_bite_eval(gt, det)
                                            : strict_bite_eval(gt, det));
    }
    if (results.size() > 1) {
      // Fold-averaged raw counts, the fractional presentation style.
      const BiteEvalResult mean = average_counts(results);
      std::cout << "mean_counts tp=" << format_double(mean.tp) << " fp=" << format_double(mean.fp)
                << " fn=" << format_double(mean.fn) << "\n";
    }
    report = results.size() == 1 ? metrics(results[0]) : aggregate(results, mode);
  } else if (task == "intervals") {
    if (span_text.empty())
      throw std::invalid_argument("evaluate: --task intervals needs --span start,end");
    const std::size_t comma = span_text.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("evaluate: --span must look like start,end");
    const double span_start = std::stod(span_text.substr(0, comma));
    const double span_end = std::stod(span_text.substr(comma + 1));
    std::vector<IntervalEvalResult> results;
    for (std::size_t i = 0; i < gt_paths.size(); ++i) {
      check_subjects(gt_paths[i], det_paths[i]);
      const IntervalSet gt = read_intervals(gt_paths[i]);
      const IntervalSet det = read_intervals(det_paths[i]);
      results.push_back(interval_eval(gt, det, grid, span_start, span_end));
    }
    report = results.size() == 1 ? metrics(results[0]) : aggregate(results, mode);
  } else {
    throw std::invalid_argument("evaluate: --task must be bites or intervals");
  }
  print_report(std::cout, report);
  write_metrics(fs::path(opts.output_dir) / "metrics.txt", report);
  return 0;
}

int cmd_indicators(const CommonOpts& opts, const std::string& episodes_path,
                   const std::string& bites_path, const std::string& bouts_path) {
  const RunConfig cfg = load_config(opts.config_path);
  ensure_output_dir(opts.output_dir);
  const IntervalSet episodes = read_intervals(episodes_path);
  const EventSet bites = read_events(bites_path);
  std::optional<IntervalSet> all_bouts;
  if (!bouts_path.empty()) all_bouts = read_intervals(bouts_path);

  auto slice_events = [](const EventSet& events, const LabeledInterval& iv) {
    std::vector<double> inside;
    for (double t : events.times())
      if (iv.contains(t)) inside.push_back(t);
    return EventSet(std::move(inside));
  };
  auto slice_intervals = [](const IntervalSet& set, const LabeledInterval& iv) {
    std::vector<LabeledInterval> inside;
    for (const LabeledInterval& b : set.intervals())
      if (b.start >= iv.start && b.end <= iv.end) inside.push_back(b);
    return IntervalSet(std::move(inside));
  };

  constexpr double kDay = 86400.0;
  std::vector<DayRecord> days;
  struct EpisodeRow {
    MealRecord record;
    EpisodeKind kind;
    InMealIndicators ind;
  };
  std::vector<EpisodeRow> rows;
  for (const LabeledInterval& iv : episodes.intervals()) {
    MealRecord record;
    record.interval = iv;
    record.bites = slice_events(bites, iv);
    if (all_bouts) record.bouts = slice_intervals(*all_bouts, iv);
    const EpisodeKind kind = classify_episode(record, cfg.indicators);
    const double day_start = std::floor(iv.start / kDay) * kDay;
    if (days.empty() || days.back().day_start != day_start) {
      DayRecord day;
      day.day_start = day_start;
      day.date = "day-" + std::to_string(static_cast<long long>(day_start / kDay));
      days.push_back(day);
    }
    if (kind == EpisodeKind::meal)
      days.back().meals.push_back(record);
    else
      days.back().snacks.push_back(record);
    rows.push_back({record, kind, in_meal_indicators(record)});
  }

  // Everything is computed before any byte hits disk, so a failure cannot
  // leave partial output.
  std::ostringstream report;
  report << "# intake-indicators v1\n";
  for (const EpisodeRow& row : rows) {
    report << "episode start=" << format_double(row.record.interval.start)
           << " end=" << format_double(row.record.interval.end)
           << " kind=" << (row.kind == EpisodeKind::meal ? "meal" : "snack")
           << " duration_s=" << format_double(row.ind.duration_s) << " bites=" << row.ind.bites_count
           << " bites_per_min=" << format_double(row.ind.bites_per_min)
           << " bout_deceleration=" << format_double(row.ind.bout_deceleration)
           << " deceleration_defined=" << (row.ind.deceleration_defined ? 1 : 0) << "\n";
  }
  for (std::size_t i = 0; i < days.size(); ++i) {
    const std::span<const DayRecord> history(days.data(), i);
    const AllDayIndicators ind = all_day_indicators(days[i], cfg.indicators, history);
    report << "day date=" << days[i].date << " main_meals=" << ind.main_meals
           << " snacks=" << ind.snack_count << " ate_breakfast=" << (ind.ate_breakfast ? 1 : 0)
           << " schedule_consistency_min=" << format_double(ind.schedule_consistency_min)
           << " consistency_defined=" << (ind.consistency_defined ? 1 : 0) << "\n";
  }

  const fs::path out_path = fs::path(opts.output_dir) / "indicators.txt";
  {
    std::ofstream tmp(out_path.string() + ".tmp", std::ios::binary);
    if (!tmp) throw std::invalid_argument("indicators: cannot write " + out_path.string());
    tmp << report.str();
  }
  fs::rename(out_path.string() + ".tmp", out_path);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Wearable intake monitoring: bite detection, meal localization, chew fusion"};
  app.require_subcommand(1);

  CommonOpts synth_opts;
  std::optional<std::uint64_t> seed;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic day with ground truth");
  add_common(synth_cmd, synth_opts);
  synth_cmd->add_option("--seed", seed, "override the config seed");

  CommonOpts pre_opts;
  std::vector<std::string> pre_inputs;
  double rot_z = 0.0, rot_x = 0.0, rot_y = 0.0;
  auto* pre_cmd = app.add_subcommand("preprocess", "median smoothing + gravity removal");
  add_common(pre_cmd, pre_opts, true);
  pre_cmd->add_option("--input", pre_inputs, "signal CSV files")->required();
  pre_cmd->add_option("--rotate-z", rot_z, "frame rotation about z (degrees)");
  pre_cmd->add_option("--rotate-x", rot_x, "frame rotation about x (degrees)");
  pre_cmd->add_option("--rotate-y", rot_y, "frame rotation about y (degrees)");

  CommonOpts bite_opts;
  std::vector<std::string> bite_inputs;
  std::string scores_path, truth_path;
  auto* bite_cmd = app.add_subcommand("detect-bites", "in-meal bite detection");
  add_common(bite_cmd, bite_opts, true);
  bite_cmd->add_option("--input", bite_inputs, "signal CSV files");
  bite_cmd->add_option("--scores", scores_path, "precomputed bite-score series");
  bite_cmd->add_option("--truth-bites", truth_path, "ground-truth events for the oracle scorer");

  CommonOpts meal_opts;
  std::string meal_input;
  auto* meal_cmd = app.add_subcommand("detect-meals", "all-day meal localization");
  add_common(meal_cmd, meal_opts);
  meal_cmd->add_option("--input", meal_input, "bite events file (or signal CSV for fsm)")
      ->required();

  CommonOpts chew_opts;
  std::string ppg_path, audio_path, audio_features_path, accel_path, ppg_scores_path,
      audio_scores_path;
  auto* chew_cmd = app.add_subcommand("detect-chews", "chew fusion + gating + aggregation");
  add_common(chew_cmd, chew_opts);
  chew_cmd->add_option("--ppg", ppg_path, "raw PPG series CSV");
  chew_cmd->add_option("--audio", audio_path, "raw audio series CSV");
  chew_cmd->add_option("--audio-features", audio_features_path, "precomputed audio features CSV");
  chew_cmd->add_option("--accel", accel_path, "triaxial accelerometer CSV for gating");
  chew_cmd->add_option("--ppg-scores", ppg_scores_path, "precomputed PPG score series");
  chew_cmd->add_option("--audio-scores", audio_scores_path, "precomputed audio score series");

  CommonOpts eval_opts;
  std::string task = "bites", scheme = "strict", agg_mode = "loso", span_text;
  double grid_override = 0.0;
  std::vector<std::string> gt_paths, det_paths;
  auto* eval_cmd = app.add_subcommand("evaluate", "score detections against ground truth");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--task", task, "bites|intervals");
  eval_cmd->add_option("--gt", gt_paths, "ground truth files")->required();
  eval_cmd->add_option("--det", det_paths, "detection files")->required();
  eval_cmd->add_option("--scheme", scheme, "strict|relaxed")
      ->check(CLI::IsMember({"strict", "relaxed"}));
  eval_cmd->add_option("--agg", agg_mode, "loso|cumulative")
      ->check(CLI::IsMember({"loso", "cumulative"}));
  eval_cmd->add_option("--span", span_text, "evaluation span start,end (intervals task)");
  eval_cmd->add_option("--grid-step", grid_override, "override the discretization step");

  CommonOpts ind_opts;
  std::string episodes_path, bites_path, bouts_path;
  auto* ind_cmd = app.add_subcommand("indicators", "behavioral indicators from detections");
  add_common(ind_cmd, ind_opts);
  ind_cmd->add_option("--episodes", episodes_path, "detected episode intervals")->required();
  ind_cmd->add_option("--bites", bites_path, "detected bite events")->required();
  ind_cmd->add_option("--bouts", bouts_path, "chewing bout intervals (optional)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth_opts, seed);
    if (pre_cmd->parsed()) return cmd_preprocess(pre_opts, pre_inputs, rot_z, rot_x, rot_y);
    if (bite_cmd->parsed()) return cmd_detect_bites(bite_opts, bite_inputs, scores_path, truth_path);
    if (meal_cmd->parsed()) return cmd_detect_meals(meal_opts, meal_input);
    if (chew_cmd->parsed())
      return cmd_detect_chews(chew_opts, ppg_path, audio_path, audio_features_path, accel_path,
                              ppg_scores_path, audio_scores_path);
    if (eval_cmd->parsed())
      return cmd_evaluate(eval_opts, task, gt_paths, det_paths, scheme, agg_mode, span_text,
                          grid_override);
    if (ind_cmd->parsed()) return cmd_indicators(ind_opts, episodes_path, bites_path, bouts_path);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace intake
