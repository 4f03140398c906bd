#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motorclass {

inline constexpr int kChannels = 12;
inline constexpr double kSampleRate = 512.0;
inline constexpr int kTrialSeconds = 8;
inline constexpr int kTrialSamples = 4096;
inline constexpr int kEpochSamples = 512;
inline constexpr int kEpochsPerTrial = kTrialSamples / kEpochSamples;
inline constexpr int kSegmentSamples = 256;
inline constexpr int kBins = 25;
inline constexpr double kBinHz = kSampleRate / kSegmentSamples;
inline constexpr int kFeatures = kChannels * kBins;

/// Trial label as stored on disk: 1 = right motor attempt, 2 = left.
enum class MotorLabel : int { Right = 1, Left = 2 };

inline constexpr MotorLabel kPositiveClass = MotorLabel::Right;

std::string_view to_string(MotorLabel label);
std::optional<MotorLabel> label_from_int(int value);
MotorLabel opposite(MotorLabel label);

/// The fixed 12-electrode montage. Index order is shared by every matrix in the library.
struct ChannelSet {
  static constexpr std::array<std::string_view, kChannels> names{
      "F3", "FC3", "C3", "CP3", "P3", "FCz", "CPz", "F4", "FC4", "C4", "CP4", "P4"};
  static constexpr std::array<int, 5> left_group{0, 1, 2, 3, 4};
  static constexpr std::array<int, 2> midline{5, 6};
  static constexpr std::array<int, 5> right_group{7, 8, 9, 10, 11};

  static std::optional<int> index_of(std::string_view name);
  /// Homologous electrode on the other hemisphere; midline channels map to themselves.
  static int mirror(int channel);
};

enum class Band { Delta, Theta, Alpha, Beta };

inline constexpr std::array<Band, 4> kAllBands{Band::Delta, Band::Theta, Band::Alpha, Band::Beta};

std::string_view to_string(Band band);
std::optional<Band> band_from_string(std::string_view name);

/// Feature-grid bins (1..25, centre 2k Hz) belonging to a band. The four sets partition 1..25.
std::span<const int> band_bins(Band band);

/// Continuous frequency range in Hz used when shaping synthetic spectra.
struct HzRange {
  double low;
  double high;
};
HzRange band_range(Band band);

inline constexpr double bin_center_hz(int bin) { return bin * kBinHz; }

}  // namespace motorclass
