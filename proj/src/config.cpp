#include "motorclass/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace motorclass {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidArgument, "config field '" + field + "': " + why);
}

const json* section(const json& j, const std::string& name, std::initializer_list<std::string_view> allowed) {
  if (!j.contains(name)) return nullptr;
  const json& s = j.at(name);
  if (!s.is_object()) bad_field(name, "must be an object");
  for (const auto& [key, value] : s.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) bad_field(name + "." + key, "unknown key");
  return &s;
}

template <typename T>
void read(const json* s, const std::string& prefix, const char* key, T& out) {
  if (!s || !s->contains(key)) return;
  try {
    out = s->at(key).get<T>();
  } catch (const json::exception&) {
    bad_field(prefix + "." + key, "wrong type");
  }
}

std::string read_enum(const json* s, const std::string& prefix, const char* key, std::string fallback) {
  read(s, prefix, key, fallback);
  return fallback;
}

}  // namespace

RunConfig parse_run_config(const json& j, RunConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  static const std::set<std::string> top{"filter", "features", "stats", "train", "cv", "fusion", "synth", "io"};
  for (const auto& [key, value] : j.items())
    if (!top.contains(key)) bad_field(key, "unknown key");

  if (const json* s = section(j, "filter", {"low_hz", "high_hz", "taps"})) {
    read(s, "filter", "low_hz", c.filter.low_hz);
    read(s, "filter", "high_hz", c.filter.high_hz);
    read(s, "filter", "taps", c.filter.taps);
  }

  if (const json* s = section(j, "features", {"scale", "overlap"})) {
    const auto scale = read_enum(s, "features", "scale", c.features.scale == FeatureScale::Decibel ? "db" : "linear");
    if (scale == "linear") c.features.scale = FeatureScale::Linear;
    else if (scale == "db") c.features.scale = FeatureScale::Decibel;
    else bad_field("features.scale", "expected linear|db, got '" + scale + "'");
    read(s, "features", "overlap", c.features.overlap);
    if (!(c.features.overlap >= 0.0 && c.features.overlap < 1.0)) bad_field("features.overlap", "must lie in [0, 1)");
  }

  if (const json* s = section(j, "stats", {"alpha", "pairing", "level", "truncate_unequal"})) {
    read(s, "stats", "alpha", c.stats.alpha);
    if (!(c.stats.alpha >= 0.0 && c.stats.alpha <= 1.0)) bad_field("stats.alpha", "must lie in [0, 1]");
    const auto pairing = read_enum(s, "stats", "pairing", "acquisition");
    if (pairing != "acquisition") bad_field("stats.pairing", "only 'acquisition' pairing is supported");
    const auto level = read_enum(s, "stats", "level", c.stats.level == stats::Level::Trial ? "trial" : "epoch");
    if (level == "epoch") c.stats.level = stats::Level::Epoch;
    else if (level == "trial") c.stats.level = stats::Level::Trial;
    else bad_field("stats.level", "expected epoch|trial, got '" + level + "'");
    read(s, "stats", "truncate_unequal", c.stats.truncate_unequal);
  }

  if (const json* s = section(j, "train", {"svm", "knn", "boosting", "lda", "nb"})) {
    const json* svm = section(*s, "svm", {"C", "epochs", "seed"});
    read(svm, "train.svm", "C", c.train.svm.C);
    read(svm, "train.svm", "epochs", c.train.svm.epochs);
    read(svm, "train.svm", "seed", c.train.svm.seed);
    read(section(*s, "knn", {"k"}), "train.knn", "k", c.train.knn.k);
    read(section(*s, "boosting", {"rounds"}), "train.boosting", "rounds", c.train.boosting.rounds);
    read(section(*s, "lda", {"shrinkage"}), "train.lda", "shrinkage", c.train.lda.shrinkage);
    read(section(*s, "nb", {"variance_floor"}), "train.nb", "variance_floor", c.train.nb.variance_floor);
    try {
      c.train.validate();
    } catch (const Error& e) {
      bad_field("train", e.what());
    }
  }

  if (const json* s = section(j, "cv", {"k", "seed", "split", "classifiers", "threads"})) {
    read(s, "cv", "k", c.cv.folds);
    if (c.cv.folds < 2) bad_field("cv.k", "must be >= 2");
    read(s, "cv", "seed", c.cv.seed);
    read(s, "cv", "threads", c.cv.threads);
    if (c.cv.threads < 1) bad_field("cv.threads", "must be >= 1");
    const auto split = read_enum(s, "cv", "split", c.cv.split == SplitLevel::Epoch ? "epoch" : "trial");
    if (split == "trial") c.cv.split = SplitLevel::Trial;
    else if (split == "epoch") c.cv.split = SplitLevel::Epoch;
    else bad_field("cv.split", "expected trial|epoch, got '" + split + "'");
    if (s->contains("classifiers")) {
      std::vector<std::string> names;
      read(s, "cv", "classifiers", names);
      c.cv.kinds.clear();
      for (const auto& n : names) {
        const auto kind = model_kind_from_string(n);
        if (!kind) bad_field("cv.classifiers", "unknown classifier '" + n + "'");
        if (std::find(c.cv.kinds.begin(), c.cv.kinds.end(), *kind) != c.cv.kinds.end())
          bad_field("cv.classifiers", "duplicate classifier '" + n + "'");
        c.cv.kinds.push_back(*kind);
      }
      if (c.cv.kinds.empty()) bad_field("cv.classifiers", "must name at least one classifier");
    }
  }

  if (const json* s = section(j, "fusion", {"ranking_source", "calibration_fraction"})) {
    const auto source = read_enum(s, "fusion", "ranking_source", c.cv.ranking == RankingSource::Train ? "train" : "holdout");
    if (source == "holdout") c.cv.ranking = RankingSource::Holdout;
    else if (source == "train") c.cv.ranking = RankingSource::Train;
    else bad_field("fusion.ranking_source", "expected holdout|train, got '" + source + "'");
    read(s, "fusion", "calibration_fraction", c.cv.calibration_fraction);
    if (!(c.cv.calibration_fraction > 0.0 && c.cv.calibration_fraction < 1.0))
      bad_field("fusion.calibration_fraction", "must lie in (0, 1)");
  }

  if (const json* s = section(j, "synth", {"n_trials_per_side", "asymmetry_db", "target_band", "target_channels",
                                           "pink_exponent", "rms_uv", "seed", "subject_id"})) {
    read(s, "synth", "n_trials_per_side", c.synth.n_trials_per_side);
    read(s, "synth", "asymmetry_db", c.synth.asymmetry_db);
    const auto band_name = read_enum(s, "synth", "target_band", std::string(to_string(c.synth.target_band)));
    const auto band = band_from_string(band_name);
    if (!band) bad_field("synth.target_band", "expected delta|theta|alpha|beta, got '" + band_name + "'");
    c.synth.target_band = *band;
    if (s->contains("target_channels")) {
      std::vector<std::string> names;
      read(s, "synth", "target_channels", names);
      c.synth.target_channels.clear();
      for (const auto& n : names) {
        const auto idx = ChannelSet::index_of(n);
        if (!idx) bad_field("synth.target_channels", "unknown channel '" + n + "'");
        c.synth.target_channels.push_back(*idx);
      }
    }
    read(s, "synth", "pink_exponent", c.synth.pink_exponent);
    read(s, "synth", "rms_uv", c.synth.rms_uv);
    read(s, "synth", "seed", c.synth.seed);
    read(s, "synth", "subject_id", c.synth.subject_id);
    try {
      c.synth.validate();
    } catch (const Error& e) {
      bad_field("synth", e.what());
    }
  }

  if (const json* s = section(j, "io", {"input", "output"})) {
    read(s, "io", "input", c.input);
    read(s, "io", "output", c.output);
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["filter"] = {{"low_hz", c.filter.low_hz}, {"high_hz", c.filter.high_hz}, {"taps", c.filter.taps}};
  j["features"] = {{"scale", c.features.scale == FeatureScale::Decibel ? "db" : "linear"},
                   {"overlap", c.features.overlap}};
  j["stats"] = {{"alpha", c.stats.alpha},
                {"pairing", "acquisition"},
                {"level", c.stats.level == stats::Level::Trial ? "trial" : "epoch"},
                {"truncate_unequal", c.stats.truncate_unequal}};
  j["train"] = {{"svm", {{"C", c.train.svm.C}, {"epochs", c.train.svm.epochs}, {"seed", c.train.svm.seed}}},
                {"knn", {{"k", c.train.knn.k}}},
                {"boosting", {{"rounds", c.train.boosting.rounds}}},
                {"lda", {{"shrinkage", c.train.lda.shrinkage}}},
                {"nb", {{"variance_floor", c.train.nb.variance_floor}}}};
  json kinds = json::array();
  for (ModelKind k : c.cv.kinds) kinds.push_back(std::string(to_string(k)));
  j["cv"] = {{"k", c.cv.folds},
             {"seed", c.cv.seed},
             {"split", c.cv.split == SplitLevel::Epoch ? "epoch" : "trial"},
             {"classifiers", kinds}};
  j["fusion"] = {{"ranking_source", c.cv.ranking == RankingSource::Train ? "train" : "holdout"},
                 {"calibration_fraction", c.cv.calibration_fraction}};
  json channels = json::array();
  for (int ch : c.synth.target_channels) channels.push_back(std::string(ChannelSet::names[static_cast<std::size_t>(ch)]));
  j["synth"] = {{"n_trials_per_side", c.synth.n_trials_per_side},
                {"asymmetry_db", c.synth.asymmetry_db},
                {"target_band", std::string(to_string(c.synth.target_band))},
                {"target_channels", channels},
                {"pink_exponent", c.synth.pink_exponent},
                {"rms_uv", c.synth.rms_uv},
                {"seed", c.synth.seed},
                {"subject_id", c.synth.subject_id}};
  j["io"] = {{"input", c.input}, {"output", c.output}};
  return j;
}

}  // namespace motorclass
