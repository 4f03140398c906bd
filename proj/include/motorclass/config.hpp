#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "motorclass/classifiers.hpp"
#include "motorclass/dataset.hpp"
#include "motorclass/eval.hpp"
#include "motorclass/features.hpp"
#include "motorclass/stats.hpp"

namespace motorclass {

struct FilterConfig {
  double low_hz = 1.0;
  double high_hz = 50.0;
  std::size_t taps = dsp::kDefaultTaps;

  dsp::FirFilter design() const { return dsp::design_bandpass(kSampleRate, low_hz, high_hz, taps); }
};

/// Every knob of the pipeline. Defaults are the library defaults.
struct RunConfig {
  FilterConfig filter;
  FeatureConfig features;
  stats::SignificanceOptions stats;
  TrainConfig train;
  CvConfig cv;
  SynthConfig synth;
  std::string input;
  std::string output;
};

/// Overlays `j` onto `base`. Unknown keys and malformed values throw InvalidArgument
/// naming the offending field, e.g. "synth.target_band".
RunConfig parse_run_config(const nlohmann::json& j, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace motorclass
