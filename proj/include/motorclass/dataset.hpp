#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "motorclass/error.hpp"
#include "motorclass/types.hpp"

namespace motorclass {

/// One 8 s recording: rows are channels in ChannelSet order, columns are samples (uV).
struct Trial {
  std::string subject_id;
  int trial_id = 0;
  MotorLabel label = MotorLabel::Right;
  Eigen::MatrixXd samples;
  double fs = kSampleRate;

  bool operator==(const Trial& other) const;
};

struct Dataset {
  std::string subject_id;
  std::vector<Trial> trials;
  ChannelSet channel_set;

  std::size_t count(MotorLabel label) const;
  bool operator==(const Dataset& other) const;
};

struct Violation {
  ErrorCode code;
  std::string message;
  int channel = -1;
  long index = -1;
};

/// Empty iff every Trial invariant holds. Never throws.
std::vector<Violation> validate_trial(const Trial& trial);

/// Non-fatal observations (currently: unequal left/right counts).
std::vector<std::string> dataset_warnings(const Dataset& dataset);

/// Reads a JSON manifest plus per-trial CSV files. Trial order follows the manifest.
/// Throws Error carrying the offending trial_id.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes `manifest.json` and one CSV per trial into `directory` (created if missing).
/// Returns the manifest path.
std::filesystem::path save_dataset(const Dataset& dataset, const std::filesystem::path& directory);

struct SynthConfig {
  int n_trials_per_side = 40;
  double asymmetry_db = 0.0;
  Band target_band = Band::Alpha;
  std::vector<int> target_channels{2, 9};  // C3, C4
  double pink_exponent = 1.0;
  double rms_uv = 10.0;
  std::uint64_t seed = 0;
  std::string subject_id = "synthetic";

  void validate() const;
};

/// Pink-noise trials, alternating Right/Left. Right trials have the target band on the
/// target channels raised by `asymmetry_db`; Left trials get the same boost on the mirrored
/// channels that are not themselves targets. Pure function of the config.
Dataset generate_synthetic(const SynthConfig& config);

}  // namespace motorclass
