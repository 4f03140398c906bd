#include "motorclass/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "motorclass/dsp.hpp"

namespace motorclass {

namespace fs = std::filesystem;
using nlohmann::json;

bool Trial::operator==(const Trial& other) const {
  return subject_id == other.subject_id && trial_id == other.trial_id && label == other.label &&
         fs == other.fs && samples.rows() == other.samples.rows() &&
         samples.cols() == other.samples.cols() && (samples.array() == other.samples.array()).all();
}

std::size_t Dataset::count(MotorLabel label) const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [label](const Trial& t) { return t.label == label; }));
}

bool Dataset::operator==(const Dataset& other) const {
  return subject_id == other.subject_id && trials == other.trials;
}

std::vector<Violation> validate_trial(const Trial& trial) {
  std::vector<Violation> report;
  if (trial.fs != kSampleRate)
    report.push_back({ErrorCode::BadSampleRate, "sampling rate " + std::to_string(trial.fs) + " Hz, expected 512"});
  if (!label_from_int(static_cast<int>(trial.label)))
    report.push_back({ErrorCode::UnknownLabel, "label value " + std::to_string(static_cast<int>(trial.label))});
  if (trial.samples.rows() != kChannels)
    report.push_back({ErrorCode::BadChannelCount,
                      std::to_string(trial.samples.rows()) + " channels, expected " + std::to_string(kChannels)});
  if (trial.samples.cols() != kTrialSamples)
    report.push_back({ErrorCode::BadSampleCount,
                      std::to_string(trial.samples.cols()) + " samples, expected " + std::to_string(kTrialSamples)});
  for (Eigen::Index c = 0; c < trial.samples.rows(); ++c)
    for (Eigen::Index i = 0; i < trial.samples.cols(); ++i)
      if (!std::isfinite(trial.samples(c, i)))
        report.push_back({ErrorCode::NonFinite, "non-finite sample", static_cast<int>(c), static_cast<long>(i)});
  return report;
}

std::vector<std::string> dataset_warnings(const Dataset& dataset) {
  std::vector<std::string> warnings;
  const auto right = dataset.count(MotorLabel::Right);
  const auto left = dataset.count(MotorLabel::Left);
  if (right != left)
    warnings.push_back("unbalanced labels: " + std::to_string(right) + " right vs " + std::to_string(left) + " left");
  return warnings;
}

namespace {

std::string read_file(const fs::path& path, std::optional<int> trial_id = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string(), trial_id);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

Eigen::MatrixXd parse_trial_csv(const std::string& text, int trial_id) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty trial file", trial_id);

  const auto header = split(trim(lines.front()), ',');
  if (header.size() != kChannels)
    throw Error(ErrorCode::BadChannelCount,
                "header has " + std::to_string(header.size()) + " columns, expected 12", trial_id);
  for (int c = 0; c < kChannels; ++c)
    if (trim(header[static_cast<std::size_t>(c)]) != ChannelSet::names[static_cast<std::size_t>(c)])
      throw Error(ErrorCode::BadChannels, "header column " + std::to_string(c) + " is '" +
                                              std::string(header[static_cast<std::size_t>(c)]) + "', expected " +
                                              std::string(ChannelSet::names[static_cast<std::size_t>(c)]),
                  trial_id);

  const auto rows = static_cast<long>(lines.size()) - 1;
  if (rows != kTrialSamples)
    throw Error(ErrorCode::BadSampleCount,
                std::to_string(rows) + " data rows, expected " + std::to_string(kTrialSamples), trial_id);

  Eigen::MatrixXd samples(kChannels, kTrialSamples);
  for (long r = 0; r < rows; ++r) {
    const auto cells = split(trim(lines[static_cast<std::size_t>(r + 1)]), ',');
    if (cells.size() != kChannels)
      throw Error(ErrorCode::BadChannelCount,
                  "row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) + " columns", trial_id);
    for (int c = 0; c < kChannels; ++c) {
      const std::string_view cell = trim(cells[static_cast<std::size_t>(c)]);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw Error(ErrorCode::ParseError,
                    "row " + std::to_string(r + 1) + " column " + std::to_string(c) + ": '" + std::string(cell) + "'",
                    trial_id);
      if (!std::isfinite(value))
        throw Error(ErrorCode::NonFinite,
                    "row " + std::to_string(r + 1) + " channel " + std::string(ChannelSet::names[static_cast<std::size_t>(c)]),
                    trial_id);
      samples(c, r) = value;
    }
  }
  return samples;
}

void append_number(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

std::string trial_file_name(int trial_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%03d.csv", trial_id);
  return buf;
}

}  // namespace

Dataset load_dataset(const fs::path& manifest_path) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadManifest, std::string("invalid JSON: ") + e.what());
  }

  Dataset dataset;
  try {
    dataset.subject_id = manifest.at("subject_id").get<std::string>();
    const double fs = manifest.at("fs").get<double>();
    if (fs != kSampleRate) throw Error(ErrorCode::BadSampleRate, "manifest fs " + std::to_string(fs) + ", expected 512");
    const auto channels = manifest.at("channels").get<std::vector<std::string>>();
    if (channels.size() != kChannels)
      throw Error(ErrorCode::BadChannels, "manifest lists " + std::to_string(channels.size()) + " channels");
    for (std::size_t c = 0; c < channels.size(); ++c)
      if (channels[c] != ChannelSet::names[c])
        throw Error(ErrorCode::BadChannels, "channel " + std::to_string(c) + " is '" + channels[c] + "', expected " +
                                                std::string(ChannelSet::names[c]));

    const json& entries = manifest.at("trials");
    if (!entries.is_array()) throw Error(ErrorCode::BadManifest, "'trials' must be an array");
    if (entries.empty()) throw Error(ErrorCode::EmptyDataset, "manifest lists no trials");

    const fs::path base = manifest_path.parent_path();
    for (const json& entry : entries) {
      Trial trial;
      trial.subject_id = dataset.subject_id;
      trial.trial_id = entry.at("trial_id").get<int>();
      const int raw_label = entry.at("label").get<int>();
      const auto label = label_from_int(raw_label);
      if (!label)
        throw Error(ErrorCode::UnknownLabel, "label " + std::to_string(raw_label) + " is not 1 or 2", trial.trial_id);
      trial.label = *label;
      const fs::path file = base / entry.at("file").get<std::string>();
      if (!fs::exists(file)) throw Error(ErrorCode::MissingFile, "missing trial file " + file.string(), trial.trial_id);
      trial.samples = parse_trial_csv(read_file(file, trial.trial_id), trial.trial_id);
      dataset.trials.push_back(std::move(trial));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadManifest, e.what());
  }
  return dataset;
}

fs::path save_dataset(const Dataset& dataset, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());

  json manifest;
  manifest["subject_id"] = dataset.subject_id;
  manifest["fs"] = static_cast<int>(kSampleRate);
  manifest["channels"] = json::array();
  for (auto name : ChannelSet::names) manifest["channels"].push_back(std::string(name));
  manifest["trials"] = json::array();

  for (const Trial& trial : dataset.trials) {
    const std::string name = trial_file_name(trial.trial_id);
    std::string text;
    text.reserve(static_cast<std::size_t>(trial.samples.size()) * 20);
    for (int c = 0; c < kChannels; ++c) {
      if (c) text += ',';
      text += ChannelSet::names[static_cast<std::size_t>(c)];
    }
    text += '\n';
    for (Eigen::Index i = 0; i < trial.samples.cols(); ++i) {
      for (Eigen::Index c = 0; c < trial.samples.rows(); ++c) {
        if (c) text += ',';
        append_number(text, trial.samples(c, i));
      }
      text += '\n';
    }
    std::ofstream out(directory / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (directory / name).string(), trial.trial_id);
    out << text;
    manifest["trials"].push_back({{"trial_id", trial.trial_id}, {"label", static_cast<int>(trial.label)}, {"file", name}});
  }

  const fs::path manifest_path = directory / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

void SynthConfig::validate() const {
  if (n_trials_per_side < 1) throw Error(ErrorCode::InvalidArgument, "n_trials_per_side must be >= 1");
  if (!(std::isfinite(asymmetry_db) && asymmetry_db >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "asymmetry_db must be finite and >= 0");
  if (!(std::isfinite(pink_exponent) && pink_exponent >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "pink_exponent must be finite and >= 0");
  if (!(std::isfinite(rms_uv) && rms_uv > 0.0)) throw Error(ErrorCode::InvalidArgument, "rms_uv must be positive");
  for (int c : target_channels)
    if (c < 0 || c >= kChannels)
      throw Error(ErrorCode::InvalidArgument, "target_channels index " + std::to_string(c) + " out of range");
}

Dataset generate_synthetic(const SynthConfig& config) {
  config.validate();

  constexpr int n = kTrialSamples;
  constexpr int half = n / 2;
  const HzRange band = band_range(config.target_band);
  const double amplitude_gain = std::pow(10.0, config.asymmetry_db / 20.0);

  std::vector<double> shape(half + 1, 0.0);  // pink power at bins 0..N/2
  double two_sided_power = 0.0;
  for (int k = 1; k <= half; ++k) {
    const double f = k * kSampleRate / n;
    shape[static_cast<std::size_t>(k)] = std::pow(f, -config.pink_exponent);
    two_sided_power += (k == half ? 1.0 : 2.0) * shape[static_cast<std::size_t>(k)];
  }
  const double scale = config.rms_uv * n / std::sqrt(two_sided_power);

  std::array<bool, kChannels> boost_right{};
  std::array<bool, kChannels> boost_left{};
  for (int c : config.target_channels) boost_right[static_cast<std::size_t>(c)] = true;
  for (int c : config.target_channels) {
    const int m = ChannelSet::mirror(c);
    if (!boost_right[static_cast<std::size_t>(m)]) boost_left[static_cast<std::size_t>(m)] = true;
  }

  Dataset dataset;
  dataset.subject_id = config.subject_id;
  const int total = 2 * config.n_trials_per_side;
  dataset.trials.reserve(static_cast<std::size_t>(total));

  for (int t = 0; t < total; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Trial trial;
    trial.subject_id = config.subject_id;
    trial.trial_id = t + 1;
    trial.label = (t % 2 == 0) ? MotorLabel::Right : MotorLabel::Left;
    trial.samples.resize(kChannels, n);
    const auto& boosted = trial.label == MotorLabel::Right ? boost_right : boost_left;

    for (int c = 0; c < kChannels; ++c) {
      dsp::ComplexVector<double> spectrum = dsp::ComplexVector<double>::Zero(n);
      for (int k = 1; k <= half; ++k) {
        const double f = k * kSampleRate / n;
        double amp = scale * std::sqrt(shape[static_cast<std::size_t>(k)]);
        if (boosted[static_cast<std::size_t>(c)] && f >= band.low && f < band.high) amp *= amplitude_gain;
        if (k == half) {
          spectrum(k) = amp * gauss(engine);
        } else {
          const double re = gauss(engine);
          const double im = gauss(engine);
          spectrum(k) = amp * std::sqrt(0.5) * std::complex<double>(re, im);
          spectrum(n - k) = std::conj(spectrum(k));
        }
      }
      trial.samples.row(c) = dsp::ifft(spectrum).real().transpose();
    }
    dataset.trials.push_back(std::move(trial));
  }
  return dataset;
}

}  // namespace motorclass
