#include <doctest.h>

#include <set>
#include <sstream>

#include <json.hpp>

#include "motorclass/cli.hpp"
#include "motorclass/dataset.hpp"
#include "motorclass/stats.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "motorclass");
  std::ostringstream out, err;
  const int status = motorclass::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::size_t count_files(const fs::path& dir, const std::string& extension) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir)) n += entry.path().extension() == extension;
  return n;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::set<std::pair<std::string, std::string>> significant_cells(const fs::path& csv) {
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  std::set<std::pair<std::string, std::string>> cells;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() == 6 && f[5] == "1") cells.insert({f[0], f[1]});
  }
  return cells;
}

// One small dataset per process, shared by the read-only tests.
const fs::path& small_dataset() {
  static TempDir dir;
  static const bool made = [] {
    const Result r = run({"--out", dir.path().string(), "--seed", "3", "synth", "--trials-per-side", "6", "--asymmetry-db", "6"});
    REQUIRE(r.status == 0);
    return true;
  }();
  (void)made;
  static const fs::path manifest = dir.path() / "manifest.json";
  return manifest;
}

}  // namespace

TEST_CASE("synth default config writes a loadable dataset") {
  TempDir dir;
  const Result r = run({"synth", "--seed", "7", "--out", dir.path().string()});
  REQUIRE(r.status == 0);
  CHECK(count_files(dir.path(), ".csv") == 80);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "effective_config.json"));
  const auto echo = nlohmann::json::parse(slurp(dir / "effective_config.json"));
  CHECK(echo["synth"]["seed"] == 7);
  const Result v = run({"validate", (dir / "manifest.json").string()});
  CHECK(v.status == 0);
  CHECK(v.out.find("OK") != std::string::npos);
  CHECK(motorclass::load_dataset(dir / "manifest.json").trials.size() == 80);
}

TEST_CASE("synth with one trial per side") {
  TempDir dir;
  REQUIRE(run({"synth", "--trials-per-side", "1", "--out", dir.path().string()}).status == 0);
  CHECK(count_files(dir.path(), ".csv") == 2);
}

TEST_CASE("synth rejects an unknown band and names the field") {
  TempDir dir;
  const Result r = run({"synth", "--band", "gamma", "--out", dir.path().string()});
  CHECK(r.status != 0);
  CHECK(r.err.find("target_band") != std::string::npos);
}

TEST_CASE("synth reports an unwritable directory") {
  TempDir dir;
  spit(dir / "blocker", "x");
  const Result r = run({"synth", "--trials-per-side", "1", "--out", (dir / "blocker" / "sub").string()});
  CHECK(r.status == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(run({}).status == 1);
  CHECK(run({"frobnicate"}).status == 1);
  CHECK(run({"synth", "--trials-per-side", "many"}).status == 1);
  const Result help = run({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("evaluate") != std::string::npos);
}

TEST_CASE("data errors exit with status 2") {
  TempDir dir;
  const Result r = run({"validate", (dir / "missing.json").string()});
  CHECK(r.status == 2);
  CHECK(r.err.find("MissingFile") != std::string::npos);
}

TEST_CASE("config files are validated") {
  TempDir dir;
  spit(dir / "bad.json", R"({"cv": {"k": 3, "sneaky": 1}})");
  const Result r = run({"--config", (dir / "bad.json").string(), "synth", "--out", dir.path().string()});
  CHECK(r.status == 1);
  CHECK(r.err.find("cv.sneaky") != std::string::npos);

  spit(dir / "good.json", R"({"synth": {"n_trials_per_side": 2}})");
  const Result ok = run({"--config", (dir / "good.json").string(), "synth", "--out", (dir / "data").string()});
  CHECK(ok.status == 0);
  CHECK(count_files(dir / "data", ".csv") == 4);
}

TEST_CASE("ttest writes the grid, bands and spectra") {
  TempDir dir;
  REQUIRE(run({"synth", "--seed", "7", "--out", (dir / "data").string()}).status == 0);
  const std::string manifest = (dir / "data" / "manifest.json").string();
  const Result r = run({"ttest", manifest, "--out", (dir / "t05").string()});
  REQUIRE(r.status == 0);
  const std::string sig = slurp(dir / "t05" / "significance.csv");
  CHECK(count_lines(sig) == 301);
  CHECK(count_lines(slurp(dir / "t05" / "bands.csv")) == 49);
  CHECK(slurp(dir / "t05" / "mean_psd.csv").rfind("channel,freq_hz,mean_left,mean_right\n", 0) == 0);

  const auto loose = significant_cells(dir / "t05" / "significance.csv");
  const double fraction = static_cast<double>(loose.size()) / 300.0;
  MESSAGE("null significant fraction " << fraction);
  CHECK(fraction >= 0.01);
  CHECK(fraction <= 0.10);

  REQUIRE(run({"ttest", manifest, "--alpha", "0.01", "--out", (dir / "t01").string()}).status == 0);
  const auto strict = significant_cells(dir / "t01" / "significance.csv");
  CHECK(std::includes(loose.begin(), loose.end(), strict.begin(), strict.end()));

  const Result bands = run({"bands", (dir / "t05" / "significance.csv").string(), "--out", (dir / "b").string()});
  CHECK(bands.status == 0);
  CHECK(slurp(dir / "b" / "bands.csv") == slurp(dir / "t05" / "bands.csv"));
}

TEST_CASE("features command exports the matrix") {
  TempDir dir;
  REQUIRE(run({"features", small_dataset().string(), "--out", dir.path().string()}).status == 0);
  const std::string csv = slurp(dir / "features.csv");
  CHECK(count_lines(csv) == 1 + 12 * 8);
  CHECK(csv.rfind("trial_id,epoch,label,F3_2Hz,", 0) == 0);
}

TEST_CASE("evaluate prints six systems and is byte-identical across runs") {
  TempDir a;
  const Result first = run({"evaluate", small_dataset().string(), "--seed", "4", "--out", a.path().string()});
  REQUIRE(first.status == 0);
  const std::string json_bytes = slurp(a / "report.json");
  const std::string csv_bytes = slurp(a / "report.csv");
  // Same output directory, since the echoed config records it; the thread count is not echoed.
  const Result second = run({"evaluate", small_dataset().string(), "--seed", "4", "--threads", "3", "--out", a.path().string()});
  REQUIRE(second.status == 0);
  CHECK(slurp(a / "report.json") == json_bytes);
  CHECK(slurp(a / "report.csv") == csv_bytes);
  CHECK(second.out == first.out);
  for (const char* name : {"SVM", "KNN", "NaiveBayes", "Boosting", "LDA", "Rule"}) CHECK(first.out.find(name) != std::string::npos);
  CHECK(count_lines(slurp(a / "report.csv")) == 7);
  const auto report = nlohmann::json::parse(slurp(a / "report.json"));
  CHECK(report.contains("config"));

  const Result summary = run({"report", (a / "report.json").string()});
  CHECK(summary.status == 0);
  CHECK(summary.out.find("Rule") != std::string::npos);
}

TEST_CASE("evaluate with two classifiers reports the fusion error") {
  TempDir dir;
  const Result r = run({"evaluate", small_dataset().string(), "--classifiers", "svm,lda", "--out", dir.path().string()});
  CHECK(r.status == 1);
  CHECK(r.err.find("at least 3") != std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["classifiers"].size() == 2);
  CHECK(report["errors"].size() == 1);
}

TEST_CASE("evaluate over several subjects writes a batch report") {
  TempDir dir;
  REQUIRE(run({"synth", "--trials-per-side", "4", "--seed", "1", "--out", (dir / "s1").string()}).status == 0);
  REQUIRE(run({"synth", "--trials-per-side", "4", "--seed", "2", "--out", (dir / "s2").string()}).status == 0);
  const Result r = run({"evaluate", (dir / "s1" / "manifest.json").string(), (dir / "s2" / "manifest.json").string(), "--out",
                        (dir / "out").string()});
  CHECK(r.status == 0);
  CHECK(fs::exists(dir / "out" / "batch_report.json"));
  CHECK(fs::exists(dir / "out" / "batch_report.csv"));
}
