#pragma once

#include <filesystem>
#include <string>

#include "intake/bite_detect.hpp"
#include "intake/chew_detect.hpp"
#include "intake/indicators.hpp"
#include "intake/meal_localize.hpp"
#include "intake/preprocess.hpp"
#include "intake/synth.hpp"

// One JSON config file drives every pipeline; missing keys fall back to the
// defaults below. See README for the schema.

namespace intake {

enum class MealMethod { density, dbscan, fsm };

struct RunConfig {
  FilterSpec filter;
  ScorerConfig scorer;
  RollBaselineConfig roll_baseline;
  PeakPickConfig peaks;
  MealLocalizeConfig meal;
  DbscanConfig dbscan;
  FsmConfig fsm;
  FusionConfig fusion;
  GateConfig gate;
  BoutConfig bouts;
  IndicatorConfig indicators;
  SynthConfig synth;
  LinearModel ppg_model{std::vector<double>(kPpgFeatureCount, 0.0), 0.0};
  LinearModel audio_model{std::vector<double>(kAudioFeatureCount, 0.0), 0.0};
  MealMethod meal_method = MealMethod::density;
  double grid_step_s = 1.0;

  static RunConfig from_json_file(const std::filesystem::path& path);
  void validate() const;
};

}  // namespace intake
