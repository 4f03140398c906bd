#include "motorclass/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "motorclass/config.hpp"

namespace motorclass::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;

  // synth
  std::optional<int> trials_per_side;
  std::optional<double> asymmetry_db;
  std::optional<std::string> band;
  std::optional<std::string> channels;
  // ttest
  std::optional<double> alpha;
  std::optional<std::string> level;
  // evaluate
  std::optional<std::string> classifiers;
  std::optional<std::string> split;
  std::optional<std::string> ranking;
  std::optional<std::string> scale;

  std::vector<std::string> inputs;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// File config first, then command-line flags on top.
RunConfig effective_config(const Options& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  json overlay = json::object();
  if (o.trials_per_side) overlay["synth"]["n_trials_per_side"] = *o.trials_per_side;
  if (o.asymmetry_db) overlay["synth"]["asymmetry_db"] = *o.asymmetry_db;
  if (o.band) overlay["synth"]["target_band"] = *o.band;
  if (o.channels) overlay["synth"]["target_channels"] = split_list(*o.channels);
  if (o.alpha) overlay["stats"]["alpha"] = *o.alpha;
  if (o.level) overlay["stats"]["level"] = *o.level;
  if (o.classifiers) overlay["cv"]["classifiers"] = split_list(*o.classifiers);
  if (o.split) overlay["cv"]["split"] = *o.split;
  if (o.ranking) overlay["fusion"]["ranking_source"] = *o.ranking;
  if (o.scale) overlay["features"]["scale"] = *o.scale;
  if (o.seed) {
    overlay["cv"]["seed"] = *o.seed;
    overlay["synth"]["seed"] = *o.seed;
  }
  if (o.threads) overlay["cv"]["threads"] = *o.threads;
  c = parse_run_config(overlay, c);
  if (!o.out.empty()) c.output = o.out;
  return c;
}

fs::path output_dir(const RunConfig& c) {
  if (c.output.empty()) throw Error(ErrorCode::InvalidArgument, "no output directory; pass --out or set io.output");
  std::error_code ec;
  fs::create_directories(c.output, ec);
  if (ec || !fs::is_directory(c.output))
    throw Error(ErrorCode::IoError, "cannot create output directory " + c.output + (ec ? ": " + ec.message() : ""));
  return c.output;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_config_echo(const fs::path& dir, const RunConfig& c) {
  auto out = open_output(dir / "effective_config.json");
  out << to_json(c).dump(2) << '\n';
}

std::string input_manifest(const Options& o, const RunConfig& c) {
  if (!o.inputs.empty()) return o.inputs.front();
  if (!c.input.empty()) return c.input;
  throw Error(ErrorCode::InvalidArgument, "no input manifest; pass a path or set io.input");
}

int cmd_synth(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  const fs::path dir = output_dir(c);
  const Dataset dataset = generate_synthetic(c.synth);
  const fs::path manifest = save_dataset(dataset, dir);
  write_config_echo(dir, c);
  out << "wrote " << dataset.trials.size() << " trials to " << manifest.string() << '\n';
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  const Dataset dataset = load_dataset(input_manifest(o, c));
  out << "subject " << dataset.subject_id << ": " << dataset.trials.size() << " trials ("
      << dataset.count(MotorLabel::Right) << " right, " << dataset.count(MotorLabel::Left) << " left)\n";
  for (const auto& w : dataset_warnings(dataset)) out << "warning: " << w << '\n';
  out << "OK\n";
  return 0;
}

int cmd_features(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  const Dataset dataset = load_dataset(input_manifest(o, c));
  const fs::path dir = output_dir(c);
  const FeatureMatrix features = build_feature_matrix(dataset, c.filter.design(), c.features);
  auto csv = open_output(dir / "features.csv");
  write_feature_csv(features, csv);
  write_config_echo(dir, c);
  out << "wrote " << features.rows() << " feature rows to " << (dir / "features.csv").string() << '\n';
  return 0;
}

int cmd_ttest(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  const Dataset dataset = load_dataset(input_manifest(o, c));
  const fs::path dir = output_dir(c);
  // Significance and P_delta are defined on linear power.
  FeatureConfig linear = c.features;
  linear.scale = FeatureScale::Linear;
  const FeatureMatrix features = build_feature_matrix(dataset, c.filter.design(), linear);
  const stats::SignificanceMap map = stats::significance_map(features, c.stats);
  {
    auto f = open_output(dir / "significance.csv");
    stats::write_significance_csv(map, f);
  }
  {
    auto f = open_output(dir / "bands.csv");
    stats::write_band_csv(stats::band_aggregate(map), f);
  }
  {
    auto f = open_output(dir / "mean_psd.csv");
    stats::write_mean_psd_csv(map, f);
  }
  write_config_echo(dir, c);
  out << map.significant.count() << " of " << map.significant.size() << " channel/frequency cells significant at p < "
      << map.alpha << " (" << map.pairs << " pairs)\n";
  return 0;
}

int cmd_bands(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  if (o.inputs.empty()) throw Error(ErrorCode::InvalidArgument, "bands needs a significance CSV path");
  std::ifstream in(o.inputs.front());
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + o.inputs.front());
  const stats::SignificanceMap map = stats::read_significance_csv(in, c.stats.alpha);
  const stats::BandMap bands = stats::band_aggregate(map);
  if (c.output.empty()) {
    stats::write_band_csv(bands, out);
    return 0;
  }
  const fs::path dir = output_dir(c);
  auto f = open_output(dir / "bands.csv");
  stats::write_band_csv(bands, f);
  out << "wrote " << (dir / "bands.csv").string() << '\n';
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = effective_config(o);
  std::vector<std::string> manifests = o.inputs;
  if (manifests.empty()) manifests.push_back(input_manifest(o, c));
  const fs::path dir = output_dir(c);
  const dsp::FirFilter filter = c.filter.design();

  std::vector<EvalReport> reports;
  for (const auto& path : manifests) {
    const Dataset dataset = load_dataset(path);
    EvalReport report = run_cv(dataset, filter, c.features, c.train, c.cv);
    report.config = to_json(c);
    const std::string stem = manifests.size() == 1 ? "report" : "report_" + dataset.subject_id;
    {
      auto f = open_output(dir / (stem + ".json"));
      f << to_json(report).dump(2) << '\n';
    }
    {
      auto f = open_output(dir / (stem + ".csv"));
      write_report_csv(report.systems, f);
    }
    out << "subject " << report.subject_id << " (" << c.cv.folds << "-fold, seed " << report.seed << ")\n";
    print_summary(report.systems, out);
    reports.push_back(std::move(report));
  }

  if (reports.size() > 1) {
    const BatchReport batch = combine_reports(reports);
    json j = to_json(batch);
    j["config"] = to_json(c);
    auto f = open_output(dir / "batch_report.json");
    f << j.dump(2) << '\n';
    auto csv = open_output(dir / "batch_report.csv");
    write_report_csv(batch.cells, csv);
    out << "all subjects (mean +/- std over subject x fold cells)\n";
    print_summary(batch.cells, out);
  }

  bool failed = false;
  for (const auto& r : reports)
    for (const auto& e : r.errors) {
      err << "error: " << e << '\n';
      failed = true;
    }
  return failed ? exit_status(ErrorCode::InvalidArgument) : 0;
}

int cmd_report(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  if (o.inputs.empty()) throw Error(ErrorCode::InvalidArgument, "report needs at least one report JSON path");
  std::vector<EvalReport> reports;
  for (const auto& path : o.inputs) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    reports.push_back(report_from_json(j));
  }
  std::vector<SystemReport> systems;
  if (reports.size() == 1) {
    systems = reports.front().systems;
    out << "subject " << reports.front().subject_id << '\n';
    print_summary(systems, out);
  } else {
    const BatchReport batch = combine_reports(reports);
    systems = batch.cells;
    out << reports.size() << " subjects (mean +/- std over subject x fold cells)\n";
    print_summary(batch.cells, out);
    out << "mean +/- std over per-subject means\n";
    print_summary(batch.subject_means, out);
  }
  if (!c.output.empty()) {
    const fs::path dir = output_dir(c);
    auto f = open_output(dir / "table.csv");
    write_report_csv(systems, f);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Left/right motor-attempt EEG classification pipeline", "motorclass"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--seed", o.seed, "Seed for synthesis and cross-validation");
  app.add_option("--threads", o.threads, "Worker threads for cross-validation folds");
  app.add_option("--out", o.out, "Output directory");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--trials-per-side", o.trials_per_side);
  synth->add_option("--asymmetry-db", o.asymmetry_db);
  synth->add_option("--band", o.band, "delta|theta|alpha|beta");
  synth->add_option("--channels", o.channels, "Comma-separated target channels");

  auto* validate = app.add_subcommand("validate", "Load and validate a dataset manifest");
  validate->add_option("manifest", o.inputs);

  auto* features = app.add_subcommand("features", "Export the epoch x 300 feature matrix");
  features->add_option("manifest", o.inputs);
  features->add_option("--scale", o.scale, "linear|db");

  auto* ttest = app.add_subcommand("ttest", "Paired t-test map, band map and mean spectra");
  ttest->add_option("manifest", o.inputs);
  ttest->add_option("--alpha", o.alpha);
  ttest->add_option("--level", o.level, "epoch|trial");

  auto* bands = app.add_subcommand("bands", "Band aggregation of a significance CSV");
  bands->add_option("significance_csv", o.inputs);

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate the classifiers and the rule ensemble");
  evaluate->add_option("manifests", o.inputs);
  evaluate->add_option("--classifiers", o.classifiers, "Comma-separated subset of svm,knn,nb,boosting,lda");
  evaluate->add_option("--split", o.split, "trial|epoch");
  evaluate->add_option("--ranking", o.ranking, "holdout|train");
  evaluate->add_option("--scale", o.scale, "linear|db");

  auto* report = app.add_subcommand("report", "Summarize one or more report JSON files");
  report->add_option("reports", o.inputs);

  std::vector<std::string> argv_tail(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (validate->parsed()) return cmd_validate(o, out);
    if (features->parsed()) return cmd_features(o, out);
    if (ttest->parsed()) return cmd_ttest(o, out);
    if (bands->parsed()) return cmd_bands(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out, err);
    if (report->parsed()) return cmd_report(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace motorclass::cli
