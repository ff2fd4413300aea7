#include "intake/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace intake {

namespace {

using nlohmann::json;

void get_if(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = j.at(key).get<double>();
}

void get_if(const json& j, const char* key, int& out) {
  if (j.contains(key)) out = j.at(key).get<int>();
}

void get_if(const json& j, const char* key, std::uint64_t& out) {
  if (j.contains(key)) out = j.at(key).get<std::uint64_t>();
}

// "HH:MM" -> seconds since local midnight.
double parse_time_of_day(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw std::invalid_argument("config: time of day must look like HH:MM");
  const int hours = std::stoi(text.substr(0, colon));
  const int minutes = std::stoi(text.substr(colon + 1));
  if (hours < 0 || hours > 24 || minutes < 0 || minutes > 59)
    throw std::invalid_argument("config: time of day out of range");
  return hours * 3600.0 + minutes * 60.0;
}

LinearModel parse_model(const json& j) {
  LinearModel model;
  model.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("bias")) model.bias = j.at("bias").get<double>();
  return model;
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }

  RunConfig cfg;
  if (j.contains("filter")) {
    const json& f = j.at("filter");
    get_if(f, "median_window", cfg.filter.median_window);
    get_if(f, "highpass_cutoff_hz", cfg.filter.highpass_cutoff_hz);
    get_if(f, "highpass_taps", cfg.filter.highpass_taps);
  }
  if (j.contains("scorer")) {
    const json& s = j.at("scorer");
    if (s.contains("kind")) {
      const auto kind = s.at("kind").get<std::string>();
      if (kind == "external_scores")
        cfg.scorer.kind = ScorerKind::external_scores;
      else if (kind == "roll_threshold_baseline")
        cfg.scorer.kind = ScorerKind::roll_threshold_baseline;
      else if (kind == "oracle_synthetic")
        cfg.scorer.kind = ScorerKind::oracle_synthetic;
      else
        throw std::invalid_argument("config: unknown scorer kind '" + kind + "'");
    }
    get_if(s, "window_s", cfg.scorer.window_s);
    get_if(s, "micro_window_s", cfg.scorer.micro_window_s);
    get_if(s, "sequence_s", cfg.scorer.sequence_s);
  }
  if (j.contains("roll_baseline")) {
    const json& r = j.at("roll_baseline");
    get_if(r, "pos_thresh", cfg.roll_baseline.pos_thresh);
    get_if(r, "neg_thresh", cfg.roll_baseline.neg_thresh);
    get_if(r, "refractory_s", cfg.roll_baseline.refractory_s);
    get_if(r, "roll_axis", cfg.roll_baseline.roll_axis);
  }
  if (j.contains("peaks")) {
    const json& p = j.at("peaks");
    get_if(p, "threshold", cfg.peaks.threshold);
    get_if(p, "min_separation_s", cfg.peaks.min_separation_s);
  }
  if (j.contains("meal")) {
    const json& m = j.at("meal");
    if (m.contains("method")) {
      const auto method = m.at("method").get<std::string>();
      if (method == "density")
        cfg.meal_method = MealMethod::density;
      else if (method == "dbscan")
        cfg.meal_method = MealMethod::dbscan;
      else if (method == "fsm")
        cfg.meal_method = MealMethod::fsm;
      else
        throw std::invalid_argument("config: unknown meal method '" + method + "'");
    }
    get_if(m, "density_window_s", cfg.meal.density_window_s);
    get_if(m, "density_threshold", cfg.meal.density_threshold);
    get_if(m, "merge_gap_s", cfg.meal.merge_gap_s);
    get_if(m, "min_meal_s", cfg.meal.min_meal_s);
  }
  if (j.contains("dbscan")) {
    const json& d = j.at("dbscan");
    get_if(d, "eps_s", cfg.dbscan.eps_s);
    get_if(d, "min_pts", cfg.dbscan.min_pts);
  }
  if (j.contains("fsm")) {
    const json& f = j.at("fsm");
    get_if(f, "variance_window_s", cfg.fsm.variance_window_s);
    get_if(f, "enter_threshold", cfg.fsm.enter_threshold);
    get_if(f, "exit_threshold", cfg.fsm.exit_threshold);
    get_if(f, "roll_axis", cfg.fsm.roll_axis);
  }
  if (j.contains("fusion")) {
    const json& f = j.at("fusion");
    get_if(f, "alpha", cfg.fusion.alpha);
    get_if(f, "a_fusion", cfg.fusion.a_fusion);
    get_if(f, "ppg_window_s", cfg.fusion.ppg_window_s);
    get_if(f, "audio_window_s", cfg.fusion.audio_window_s);
  }
  if (j.contains("gate")) {
    const json& g = j.at("gate");
    get_if(g, "window_s", cfg.gate.window_s);
    get_if(g, "magnitude_var_threshold", cfg.gate.magnitude_var_threshold);
  }
  if (j.contains("bouts")) {
    const json& b = j.at("bouts");
    get_if(b, "chew_gap_s", cfg.bouts.chew_gap_s);
    get_if(b, "episode_gap_s", cfg.bouts.episode_gap_s);
  }
  if (j.contains("indicators")) {
    const json& ind = j.at("indicators");
    get_if(ind, "snack_max_duration_s", cfg.indicators.snack_max_duration_s);
    get_if(ind, "snack_max_bites", cfg.indicators.snack_max_bites);
    if (ind.contains("breakfast_window")) {
      const auto window = ind.at("breakfast_window").get<std::vector<std::string>>();
      if (window.size() != 2)
        throw std::invalid_argument("config: breakfast_window needs [start, end]");
      cfg.indicators.breakfast_start_tod_s = parse_time_of_day(window[0]);
      cfg.indicators.breakfast_end_tod_s = parse_time_of_day(window[1]);
    }
  }
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    get_if(s, "seed", cfg.synth.seed);
    get_if(s, "duration_s", cfg.synth.duration_s);
    get_if(s, "rate", cfg.synth.rate);
    get_if(s, "n_meals", cfg.synth.n_meals);
    if (s.contains("meal_duration_s")) {
      const auto range = s.at("meal_duration_s").get<std::vector<double>>();
      if (range.size() != 2) throw std::invalid_argument("config: meal_duration_s needs [min, max]");
      cfg.synth.meal_duration_min_s = range[0];
      cfg.synth.meal_duration_max_s = range[1];
    }
    if (s.contains("bite_rate_per_min")) {
      const auto range = s.at("bite_rate_per_min").get<std::vector<double>>();
      if (range.size() != 2)
        throw std::invalid_argument("config: bite_rate_per_min needs [min, max]");
      cfg.synth.bite_rate_min_per_min = range[0];
      cfg.synth.bite_rate_max_per_min = range[1];
    }
    if (s.contains("confounders")) {
      cfg.synth.walking = false;
      cfg.synth.gesturing = false;
      for (const auto& c : s.at("confounders").get<std::vector<std::string>>()) {
        if (c == "walking")
          cfg.synth.walking = true;
        else if (c == "gesturing")
          cfg.synth.gesturing = true;
        else
          throw std::invalid_argument("config: unknown confounder '" + c + "'");
      }
    }
    get_if(s, "noise_std", cfg.synth.noise_std);
  }
  if (j.contains("eval")) get_if(j.at("eval"), "grid_step_s", cfg.grid_step_s);
  if (j.contains("ppg_model")) cfg.ppg_model = parse_model(j.at("ppg_model"));
  if (j.contains("audio_model")) cfg.audio_model = parse_model(j.at("audio_model"));

  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  scorer.validate();
  roll_baseline.validate();
  peaks.validate();
  meal.validate();
  dbscan.validate();
  fsm.validate();
  fusion.validate();
  gate.validate();
  bouts.validate();
  indicators.validate();
  synth.validate();
  if (!(grid_step_s > 0.0)) throw std::invalid_argument("config: grid_step_s must be > 0");
  // Model weight counts are checked where the models meet features: built-in
  // extractors have fixed dimensions, precomputed feature files do not.
}

}  // namespace intake
