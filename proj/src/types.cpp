#include "motorclass/types.hpp"

#include <algorithm>

namespace motorclass {

std::string_view to_string(MotorLabel label) {
  return label == MotorLabel::Right ? "Right" : "Left";
}

std::optional<MotorLabel> label_from_int(int value) {
  if (value == 1) return MotorLabel::Right;
  if (value == 2) return MotorLabel::Left;
  return std::nullopt;
}

MotorLabel opposite(MotorLabel label) {
  return label == MotorLabel::Right ? MotorLabel::Left : MotorLabel::Right;
}

std::optional<int> ChannelSet::index_of(std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

int ChannelSet::mirror(int channel) {
  if (channel >= 0 && channel <= 4) return channel + 7;
  if (channel >= 7 && channel <= 11) return channel - 7;
  return channel;
}

std::string_view to_string(Band band) {
  switch (band) {
    case Band::Delta: return "delta";
    case Band::Theta: return "theta";
    case Band::Alpha: return "alpha";
    case Band::Beta: return "beta";
  }
  return "";
}

std::optional<Band> band_from_string(std::string_view name) {
  for (Band b : kAllBands)
    if (to_string(b) == name) return b;
  return std::nullopt;
}

namespace {
constexpr std::array<int, 1> kDeltaBins{1};
constexpr std::array<int, 2> kThetaBins{2, 3};
constexpr std::array<int, 3> kAlphaBins{4, 5, 6};
constexpr std::array<int, 19> kBetaBins{7, 8, 9, 10, 11, 12, 13, 14, 15, 16,
                                        17, 18, 19, 20, 21, 22, 23, 24, 25};
}  // namespace

std::span<const int> band_bins(Band band) {
  switch (band) {
    case Band::Delta: return kDeltaBins;
    case Band::Theta: return kThetaBins;
    case Band::Alpha: return kAlphaBins;
    case Band::Beta: return kBetaBins;
  }
  return {};
}

HzRange band_range(Band band) {
  switch (band) {
    case Band::Delta: return {0.5, 3.5};
    case Band::Theta: return {3.5, 7.5};
    case Band::Alpha: return {7.5, 13.0};
    case Band::Beta: return {14.0, 50.0};
  }
  return {0.0, 0.0};
}

}  // namespace motorclass
