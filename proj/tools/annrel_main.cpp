#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "annrel.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 2 input or validation error, 3 numerical failure.

struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& message)
      : std::runtime_error(message), exit_code(code) {}
  int exit_code;
};

int exit_code_for(annrel_status status) {
  switch (status) {
    case ANNREL_OK:
      return 0;
    case ANNREL_ERR_NUMERIC:
    case ANNREL_ERR_INTERNAL:
      return 3;
    default:
      return 2;
  }
}

void require(annrel_status status) {
  if (status != ANNREL_OK) {
    throw CommandError(exit_code_for(status), annrel_last_error());
  }
}

template <typename T>
struct HandleDeleter {
  void (*fn)(T*) = nullptr;
  void operator()(T* ptr) const {
    if (ptr && fn) fn(ptr);
  }
};

template <typename T>
using Handle = std::unique_ptr<T, HandleDeleter<T>>;

template <typename T>
Handle<T> take(T* ptr, void (*fn)(T*)) {
  return Handle<T>(ptr, HandleDeleter<T>{fn});
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw CommandError(2, "cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw CommandError(3, "cannot initialize digest");
  }
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof(buffer));
    const std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buffer, size_t(got)) != 1) {
      throw CommandError(3, "digest update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw CommandError(3, "digest finalization failed");
  }
  static const char hex[] = "0123456789abcdef";
  std::string text;
  text.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    text.push_back(hex[digest[i] >> 4]);
    text.push_back(hex[digest[i] & 0xf]);
  }
  return text;
}

/// Collects what each command resolved and touched, then lands as
/// manifest.json next to the command's outputs.
class Manifest {
 public:
  Manifest(std::string command, fs::path out_dir)
      : command_(std::move(command)),
        out_dir_(std::move(out_dir)),
        start_(std::chrono::steady_clock::now()) {
    arguments_ = ordered_json::object();
    results_ = ordered_json::object();
  }

  ordered_json& arguments() { return arguments_; }
  ordered_json& results() { return results_; }

  void add_input(const std::string& path) { inputs_.push_back(path); }
  void add_output(const std::string& name) { outputs_.push_back(name); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  void write() const {
    ordered_json doc;
    doc["command"] = command_;
    doc["version"] = annrel_version();
    doc["arguments"] = arguments_;
    doc["inputs"] = ordered_json::array();
    for (const std::string& path : inputs_) {
      ordered_json entry;
      entry["path"] = path;
      entry["sha256"] = sha256_file(path);
      doc["inputs"].push_back(std::move(entry));
    }
    doc["outputs"] = outputs_;
    doc["results"] = results_;
    if (seed_.has_value()) {
      doc["seed"] = *seed_;
    } else {
      doc["seed"] = nullptr;
    }
    doc["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out.is_open()) throw CommandError(2, "cannot write manifest.json");
    out << doc.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  ordered_json arguments_;
  ordered_json results_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::optional<std::uint64_t> seed_;
};

fs::path prepare_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw CommandError(2, "cannot create output directory " + out);
  return fs::path(out);
}

Handle<annrel_vocab> load_vocab(const std::string& path) {
  annrel_vocab* raw = nullptr;
  require(annrel_vocab_read(path.c_str(), &raw));
  return take(raw, annrel_vocab_free);
}

Handle<annrel_matrix> load_matrix(const std::string& path, const annrel_vocab* vocab) {
  annrel_matrix* raw = nullptr;
  require(annrel_matrix_read(path.c_str(), vocab, &raw));
  return take(raw, annrel_matrix_free);
}

Handle<annrel_competence> load_competence(const std::string& path) {
  annrel_competence* raw = nullptr;
  require(annrel_competence_read(path.c_str(), &raw));
  return take(raw, annrel_competence_free);
}

std::unordered_map<std::string, double> competence_map(const annrel_competence* competence) {
  std::unordered_map<std::string, double> map;
  const size_t count = annrel_competence_count(competence);
  map.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    double theta = 0.0;
    require(annrel_competence_theta(competence, i, &theta));
    map.emplace(annrel_competence_id(competence, i), theta);
  }
  return map;
}

/// Annotators of `matrix` with competence >= threshold. Every annotator must
/// have a competence entry.
std::vector<std::string> keep_above(const annrel_matrix* matrix,
                                    const std::unordered_map<std::string, double>& theta,
                                    double threshold) {
  std::vector<std::string> keep;
  const size_t count = annrel_matrix_num_annotators(matrix);
  for (size_t j = 0; j < count; ++j) {
    const std::string id = annrel_matrix_annotator(matrix, j);
    const auto it = theta.find(id);
    if (it == theta.end()) {
      throw CommandError(2, "no competence entry for annotator \"" + id + "\"");
    }
    if (it->second >= threshold) keep.push_back(id);
  }
  return keep;
}

Handle<annrel_matrix> filter_matrix(const annrel_matrix* matrix,
                                    const std::vector<std::string>& keep) {
  std::vector<const char*> ids;
  ids.reserve(keep.size());
  for (const std::string& id : keep) ids.push_back(id.c_str());
  annrel_matrix* raw = nullptr;
  require(annrel_matrix_filter(matrix, ids.data(), ids.size(), &raw));
  return take(raw, annrel_matrix_free);
}

struct MaceFlags {
  std::uint64_t restarts = 10;
  std::uint64_t iterations = 50;
  double tolerance = 1e-6;
  double smoothing = 0.1;
};

Handle<annrel_model> fit_model(const annrel_matrix* matrix, const MaceFlags& flags,
                               std::uint64_t seed) {
  annrel_mace_config config;
  annrel_mace_config_init(&config);
  config.restarts = flags.restarts;
  config.max_iterations = flags.iterations;
  config.tolerance = flags.tolerance;
  config.smoothing_delta = flags.smoothing;
  config.seed = seed;
  annrel_model* raw = nullptr;
  require(annrel_mace_fit(matrix, &config, &raw));
  return take(raw, annrel_model_free);
}

Handle<annrel_estimate> predict_estimate(const annrel_model* model) {
  annrel_estimate* raw = nullptr;
  require(annrel_mace_predict(model, &raw));
  return take(raw, annrel_estimate_free);
}

Handle<annrel_estimate> threshold_estimate(const annrel_estimate* estimate,
                                           double keep_percent) {
  annrel_estimate* raw = nullptr;
  require(annrel_estimate_threshold(estimate, keep_percent, &raw));
  return take(raw, annrel_estimate_free);
}

Handle<annrel_stats> estimate_stats(const annrel_estimate* estimate) {
  annrel_stats* raw = nullptr;
  require(annrel_label_statistics(estimate, &raw));
  return take(raw, annrel_stats_free);
}

void record_alpha(ordered_json& results, const annrel_alpha_report& report) {
  if (report.defined) {
    results["alpha"] = report.alpha;
  } else {
    results["alpha"] = nullptr;
  }
  results["units_used"] = report.units_used;
  results["excluded_units"] = report.excluded_units;
}

/* ---- command options ---- */

struct GlobalOptions {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool has_seed = false;
};

std::uint64_t require_seed(const GlobalOptions& global) {
  if (!global.has_seed) {
    throw CommandError(2, "this command is stochastic; pass an explicit --seed");
  }
  return global.seed;
}

struct ExpandOptions {
  std::string campaign;
  std::string vocab;
};

struct AlphaOptions {
  std::string input;
  std::string vocab;
  bool by_class = false;
  std::string competence;
  std::vector<double> thresholds;
};

struct MaceOptions {
  std::string input;
  std::string vocab;
  MaceFlags flags;
  double keep_percent = 100.0;
  bool has_keep_percent = false;
};

struct AggregateOptions {
  std::string input;
  std::string vocab;
  std::string method;
  MaceFlags flags;
};

struct FilterOptions {
  std::string input;
  std::string vocab;
  std::string competence;
  double min_theta = 0.0;
  bool has_min_theta = false;
  std::vector<std::string> keep;
};

struct SimulateOptions {
  std::string spec;
  bool spammers_preset = false;
  std::uint64_t annotators = 150;
  std::uint64_t files_per_annotator = 130;
  std::uint64_t files = 3930;
  std::uint64_t labels = 10;
};

struct ReportOptions {
  std::string input;
  std::string vocab;
  std::string competence;
  std::string truth;
  std::vector<double> thresholds{0.6, 0.8};
  std::vector<double> sweep;
  MaceFlags flags;
  double keep_percent = 90.0;
};

/* ---- commands ---- */

int cmd_expand(const GlobalOptions& global, const ExpandOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  Manifest manifest("expand", out_dir);
  manifest.arguments()["campaign"] = opt.campaign;
  manifest.arguments()["vocab"] = opt.vocab;
  manifest.add_input(opt.campaign);
  manifest.add_input(opt.vocab);

  auto vocab = load_vocab(opt.vocab);
  annrel_matrix* raw = nullptr;
  require(annrel_matrix_from_campaign(opt.campaign.c_str(), vocab.get(), &raw));
  auto matrix = take(raw, annrel_matrix_free);
  require(annrel_matrix_write(matrix.get(), (out_dir / "matrix.csv").c_str()));
  manifest.add_output("matrix.csv");
  manifest.results()["items"] = annrel_matrix_num_items(matrix.get());
  manifest.results()["files"] = annrel_matrix_num_files(matrix.get());
  manifest.results()["annotators"] = annrel_matrix_num_annotators(matrix.get());
  manifest.results()["cells"] = annrel_matrix_num_cells(matrix.get());
  manifest.write();
  return 0;
}

int cmd_alpha(const GlobalOptions& global, const AlphaOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  Manifest manifest("alpha", out_dir);
  manifest.arguments()["input"] = opt.input;
  manifest.arguments()["vocab"] = opt.vocab;
  manifest.arguments()["by_class"] = opt.by_class;
  manifest.arguments()["format"] = global.format;
  manifest.add_input(opt.input);

  Handle<annrel_vocab> vocab;
  if (!opt.vocab.empty()) {
    vocab = load_vocab(opt.vocab);
    manifest.add_input(opt.vocab);
  }
  auto matrix = load_matrix(opt.input, vocab.get());

  annrel_reports* raw_reports = nullptr;
  require(annrel_alpha_reports(matrix.get(), opt.by_class ? 1 : 0, &raw_reports));
  auto reports = take(raw_reports, annrel_reports_free);
  const std::string report_name = global.format == "csv" ? "report.csv" : "report.json";
  if (global.format == "csv") {
    require(annrel_reports_write_csv(reports.get(), (out_dir / report_name).c_str()));
  } else {
    require(annrel_reports_write_json(reports.get(), (out_dir / report_name).c_str()));
  }
  manifest.add_output(report_name);

  annrel_alpha_report overall;
  require(annrel_alpha_overall(matrix.get(), &overall));
  record_alpha(manifest.results(), overall);

  if (!opt.competence.empty()) {
    if (opt.thresholds.empty()) {
      throw CommandError(2, "--competence requires --thresholds");
    }
    manifest.arguments()["competence"] = opt.competence;
    manifest.arguments()["thresholds"] = opt.thresholds;
    manifest.add_input(opt.competence);
    auto competence = load_competence(opt.competence);
    annrel_sweep* raw_sweep = nullptr;
    require(annrel_alpha_sweep(matrix.get(), competence.get(), opt.thresholds.data(),
                               opt.thresholds.size(), &raw_sweep));
    auto sweep = take(raw_sweep, annrel_sweep_free);
    const std::string sweep_name = global.format == "csv" ? "sweep.csv" : "sweep.json";
    if (global.format == "csv") {
      require(annrel_sweep_write_csv(sweep.get(), (out_dir / sweep_name).c_str()));
    } else {
      require(annrel_sweep_write_json(sweep.get(), (out_dir / sweep_name).c_str()));
    }
    manifest.add_output(sweep_name);
  }
  manifest.write();
  return 0;
}

int cmd_mace(const GlobalOptions& global, const MaceOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  const std::uint64_t seed = require_seed(global);
  Manifest manifest("mace", out_dir);
  manifest.set_seed(seed);
  manifest.arguments()["input"] = opt.input;
  manifest.arguments()["vocab"] = opt.vocab;
  manifest.arguments()["restarts"] = opt.flags.restarts;
  manifest.arguments()["iterations"] = opt.flags.iterations;
  manifest.arguments()["tolerance"] = opt.flags.tolerance;
  manifest.arguments()["smoothing"] = opt.flags.smoothing;
  if (opt.has_keep_percent) manifest.arguments()["keep_percent"] = opt.keep_percent;
  manifest.add_input(opt.input);

  Handle<annrel_vocab> vocab;
  if (!opt.vocab.empty()) {
    vocab = load_vocab(opt.vocab);
    manifest.add_input(opt.vocab);
  }
  auto matrix = load_matrix(opt.input, vocab.get());
  auto model = fit_model(matrix.get(), opt.flags, seed);
  auto estimate = predict_estimate(model.get());
  if (opt.has_keep_percent) {
    estimate = threshold_estimate(estimate.get(), opt.keep_percent);
  }

  require(annrel_model_write_json(model.get(), estimate.get(),
                                  (out_dir / "model.json").c_str()));
  manifest.add_output("model.json");
  annrel_competence* raw_competence = nullptr;
  require(annrel_model_competence(model.get(), &raw_competence));
  auto competence = take(raw_competence, annrel_competence_free);
  require(annrel_competence_write_csv(competence.get(), (out_dir / "competence.csv").c_str()));
  manifest.add_output("competence.csv");
  require(annrel_estimate_write_csv(estimate.get(), (out_dir / "labels.csv").c_str()));
  manifest.add_output("labels.csv");

  manifest.results()["final_log_likelihood"] = annrel_model_log_likelihood(model.get());
  manifest.results()["iterations_used"] = annrel_model_iterations(model.get());
  manifest.results()["best_restart"] = annrel_model_best_restart(model.get());
  manifest.write();
  return 0;
}

int cmd_aggregate(const GlobalOptions& global, const AggregateOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  Manifest manifest("aggregate", out_dir);
  manifest.arguments()["input"] = opt.input;
  manifest.arguments()["vocab"] = opt.vocab;
  manifest.arguments()["method"] = opt.method;
  manifest.add_input(opt.input);

  Handle<annrel_vocab> vocab;
  if (!opt.vocab.empty()) {
    vocab = load_vocab(opt.vocab);
    manifest.add_input(opt.vocab);
  }
  auto matrix = load_matrix(opt.input, vocab.get());

  Handle<annrel_estimate> estimate;
  if (opt.method == "union") {
    annrel_estimate* raw = nullptr;
    require(annrel_union_vote(matrix.get(), &raw));
    estimate = take(raw, annrel_estimate_free);
  } else if (opt.method == "majority") {
    annrel_estimate* raw = nullptr;
    require(annrel_majority_vote(matrix.get(), &raw));
    estimate = take(raw, annrel_estimate_free);
  } else if (opt.method == "mace" || opt.method.rfind("mace@", 0) == 0) {
    const std::uint64_t seed = require_seed(global);
    manifest.set_seed(seed);
    manifest.arguments()["restarts"] = opt.flags.restarts;
    manifest.arguments()["iterations"] = opt.flags.iterations;
    manifest.arguments()["tolerance"] = opt.flags.tolerance;
    manifest.arguments()["smoothing"] = opt.flags.smoothing;
    auto model = fit_model(matrix.get(), opt.flags, seed);
    estimate = predict_estimate(model.get());
    if (opt.method != "mace") {
      double keep_percent = 0.0;
      try {
        size_t used = 0;
        keep_percent = std::stod(opt.method.substr(5), &used);
        if (used != opt.method.size() - 5) throw std::invalid_argument(opt.method);
      } catch (const std::exception&) {
        throw CommandError(2, "cannot parse keep percentage in \"" + opt.method + "\"");
      }
      estimate = threshold_estimate(estimate.get(), keep_percent);
    }
  } else {
    throw CommandError(2, "unknown method \"" + opt.method +
                              "\" (expected union, majority, mace or mace@P)");
  }

  require(annrel_estimate_write_csv(estimate.get(), (out_dir / "labels.csv").c_str()));
  manifest.add_output("labels.csv");
  auto stats = estimate_stats(estimate.get());
  require(annrel_stats_write_csv(stats.get(), (out_dir / "stats.csv").c_str()));
  manifest.add_output("stats.csv");
  require(annrel_histogram_write_json(stats.get(), (out_dir / "histogram.json").c_str()));
  manifest.add_output("histogram.json");

  manifest.results()["method"] = annrel_estimate_method(estimate.get());
  manifest.results()["mean_labels_per_file"] = annrel_stats_mean_labels_per_file(stats.get());
  manifest.write();
  return 0;
}

int cmd_filter(const GlobalOptions& global, const FilterOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  Manifest manifest("filter", out_dir);
  manifest.arguments()["input"] = opt.input;
  manifest.arguments()["vocab"] = opt.vocab;
  manifest.add_input(opt.input);

  Handle<annrel_vocab> vocab;
  if (!opt.vocab.empty()) {
    vocab = load_vocab(opt.vocab);
    manifest.add_input(opt.vocab);
  }
  auto matrix = load_matrix(opt.input, vocab.get());

  std::vector<std::string> keep;
  if (!opt.keep.empty()) {
    if (!opt.competence.empty() || opt.has_min_theta) {
      throw CommandError(2, "--keep excludes --competence/--min-theta");
    }
    keep = opt.keep;
    manifest.arguments()["keep"] = opt.keep;
  } else {
    if (opt.competence.empty() || !opt.has_min_theta) {
      throw CommandError(2, "pass either --keep or both --competence and --min-theta");
    }
    manifest.arguments()["competence"] = opt.competence;
    manifest.arguments()["min_theta"] = opt.min_theta;
    manifest.add_input(opt.competence);
    auto competence = load_competence(opt.competence);
    keep = keep_above(matrix.get(), competence_map(competence.get()), opt.min_theta);
  }

  auto filtered = filter_matrix(matrix.get(), keep);
  require(annrel_matrix_write(filtered.get(), (out_dir / "matrix.csv").c_str()));
  manifest.add_output("matrix.csv");
  manifest.results()["annotators_kept"] = annrel_matrix_num_annotators(filtered.get());
  manifest.results()["cells"] = annrel_matrix_num_cells(filtered.get());
  manifest.write();
  return 0;
}

int cmd_simulate(const GlobalOptions& global, const SimulateOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  Manifest manifest("simulate", out_dir);

  Handle<annrel_spec> spec;
  if (!opt.spec.empty() && opt.spammers_preset) {
    throw CommandError(2, "--spec and --spammers-preset are mutually exclusive");
  }
  if (!opt.spec.empty()) {
    manifest.arguments()["spec"] = opt.spec;
    manifest.add_input(opt.spec);
    annrel_spec* raw = nullptr;
    require(annrel_spec_read(opt.spec.c_str(), &raw));
    spec = take(raw, annrel_spec_free);
    if (global.has_seed) require(annrel_spec_set_seed(spec.get(), global.seed));
  } else if (opt.spammers_preset) {
    const std::uint64_t seed = require_seed(global);
    manifest.arguments()["spammers_preset"] = true;
    manifest.arguments()["annotators"] = opt.annotators;
    manifest.arguments()["files_per_annotator"] = opt.files_per_annotator;
    manifest.arguments()["files"] = opt.files;
    manifest.arguments()["labels"] = opt.labels;
    annrel_spec* raw = nullptr;
    require(annrel_spammers_spec(seed, opt.annotators, opt.files_per_annotator, opt.files,
                                 opt.labels, &raw));
    spec = take(raw, annrel_spec_free);
  } else {
    throw CommandError(2, "pass either --spec or --spammers-preset");
  }
  if (global.has_seed) manifest.set_seed(global.seed);

  annrel_campaign* raw_campaign = nullptr;
  require(annrel_generate_campaign(spec.get(), &raw_campaign));
  auto campaign = take(raw_campaign, annrel_campaign_free);
  annrel_matrix* raw_matrix = nullptr;
  require(annrel_campaign_matrix(campaign.get(), &raw_matrix));
  auto matrix = take(raw_matrix, annrel_matrix_free);

  require(annrel_matrix_write(matrix.get(), (out_dir / "campaign.csv").c_str()));
  manifest.add_output("campaign.csv");
  require(annrel_campaign_write_truth_csv(campaign.get(), (out_dir / "truth.csv").c_str()));
  manifest.add_output("truth.csv");
  require(annrel_spec_write_json(spec.get(), (out_dir / "spec.json").c_str()));
  manifest.add_output("spec.json");

  manifest.results()["records"] = annrel_campaign_num_records(campaign.get());
  manifest.results()["items"] = annrel_matrix_num_items(matrix.get());
  manifest.results()["annotators"] = annrel_matrix_num_annotators(matrix.get());
  manifest.results()["cells"] = annrel_matrix_num_cells(matrix.get());
  manifest.write();
  return 0;
}

int cmd_report(const GlobalOptions& global, const ReportOptions& opt) {
  const fs::path out_dir = prepare_out_dir(global.out);
  const std::uint64_t seed = require_seed(global);
  Manifest manifest("report", out_dir);
  manifest.set_seed(seed);
  manifest.arguments()["input"] = opt.input;
  manifest.arguments()["vocab"] = opt.vocab;
  manifest.arguments()["thresholds"] = opt.thresholds;
  manifest.arguments()["keep_percent"] = opt.keep_percent;
  manifest.arguments()["restarts"] = opt.flags.restarts;
  manifest.arguments()["iterations"] = opt.flags.iterations;
  manifest.arguments()["tolerance"] = opt.flags.tolerance;
  manifest.arguments()["smoothing"] = opt.flags.smoothing;
  manifest.add_input(opt.input);

  Handle<annrel_vocab> vocab;
  if (!opt.vocab.empty()) {
    vocab = load_vocab(opt.vocab);
    manifest.add_input(opt.vocab);
  }
  auto matrix = load_matrix(opt.input, vocab.get());

  auto model = fit_model(matrix.get(), opt.flags, seed);
  auto mace_est = predict_estimate(model.get());
  auto mace_at_est = threshold_estimate(mace_est.get(), opt.keep_percent);
  annrel_estimate* raw_union = nullptr;
  require(annrel_union_vote(matrix.get(), &raw_union));
  auto union_est = take(raw_union, annrel_estimate_free);
  annrel_estimate* raw_majority = nullptr;
  require(annrel_majority_vote(matrix.get(), &raw_majority));
  auto majority_est = take(raw_majority, annrel_estimate_free);

  auto union_stats = estimate_stats(union_est.get());
  auto majority_stats = estimate_stats(majority_est.get());
  auto mace_stats = estimate_stats(mace_est.get());
  auto mace_at_stats = estimate_stats(mace_at_est.get());
  const annrel_stats* series[] = {union_stats.get(), majority_stats.get(), mace_stats.get(),
                                  mace_at_stats.get()};
  require(annrel_method_table_write_csv(series, 4, (out_dir / "label_stats.csv").c_str()));
  manifest.add_output("label_stats.csv");
  require(
      annrel_histogram_series_write_json(series, 4, (out_dir / "labels_per_file.json").c_str()));
  manifest.add_output("labels_per_file.json");

  // Competence used for filtering: an explicit table wins over the estimate.
  Handle<annrel_competence> competence;
  if (!opt.competence.empty()) {
    manifest.arguments()["competence"] = opt.competence;
    manifest.add_input(opt.competence);
    competence = load_competence(opt.competence);
  } else {
    annrel_competence* raw = nullptr;
    require(annrel_model_competence(model.get(), &raw));
    competence = take(raw, annrel_competence_free);
  }
  require(annrel_competence_write_csv(competence.get(), (out_dir / "competence.csv").c_str()));
  manifest.add_output("competence.csv");
  const auto theta = competence_map(competence.get());

  // Class x threshold table: unfiltered column plus one per threshold.
  std::vector<Handle<annrel_reports>> columns;
  std::vector<std::string> column_names;
  {
    annrel_reports* raw = nullptr;
    require(annrel_alpha_reports(matrix.get(), 1, &raw));
    columns.push_back(take(raw, annrel_reports_free));
    column_names.push_back("all");
  }
  for (const double threshold : opt.thresholds) {
    auto filtered = filter_matrix(matrix.get(), keep_above(matrix.get(), theta, threshold));
    annrel_reports* raw = nullptr;
    require(annrel_alpha_reports(filtered.get(), 1, &raw));
    columns.push_back(take(raw, annrel_reports_free));
    std::ostringstream name;
    name << "ge_" << threshold;
    column_names.push_back(name.str());
  }
  {
    std::vector<const annrel_reports*> raw_columns;
    std::vector<const char*> raw_names;
    for (const auto& column : columns) raw_columns.push_back(column.get());
    for (const std::string& name : column_names) raw_names.push_back(name.c_str());
    require(annrel_class_table_write_csv(raw_columns.data(), raw_names.data(),
                                         raw_columns.size(),
                                         (out_dir / "alpha_by_class.csv").c_str()));
    manifest.add_output("alpha_by_class.csv");
  }

  std::vector<double> sweep_grid = opt.sweep;
  if (sweep_grid.empty()) {
    for (int k = 0; k <= 20; ++k) sweep_grid.push_back(double(k) / 20.0);
  }
  manifest.arguments()["sweep_thresholds"] = sweep_grid;
  annrel_sweep* raw_sweep = nullptr;
  require(annrel_alpha_sweep(matrix.get(), competence.get(), sweep_grid.data(),
                             sweep_grid.size(), &raw_sweep));
  auto sweep = take(raw_sweep, annrel_sweep_free);
  require(annrel_sweep_write_csv(sweep.get(), (out_dir / "alpha_sweep.csv").c_str()));
  manifest.add_output("alpha_sweep.csv");

  if (!opt.truth.empty()) {
    manifest.arguments()["truth"] = opt.truth;
    manifest.add_input(opt.truth);
    annrel_truth* raw_truth = nullptr;
    require(annrel_truth_read(opt.truth.c_str(), &raw_truth));
    auto truth = take(raw_truth, annrel_truth_free);
    const annrel_estimate* estimates[] = {union_est.get(), majority_est.get(), mace_est.get(),
                                          mace_at_est.get()};
    require(annrel_recovery_write_csv(estimates, 4, truth.get(),
                                      (out_dir / "recovery.csv").c_str()));
    manifest.add_output("recovery.csv");
  }

  annrel_alpha_report overall;
  require(annrel_alpha_overall(matrix.get(), &overall));
  record_alpha(manifest.results(), overall);
  manifest.results()["final_log_likelihood"] = annrel_model_log_likelihood(model.get());
  manifest.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annotation reliability toolkit"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--out", global.out, "output directory")->required();
  CLI::Option* seed_opt = app.add_option("--seed", global.seed, "RNG seed");
  app.add_option("--format", global.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ExpandOptions expand_opt;
  CLI::App* expand = app.add_subcommand("expand", "binarize a campaign CSV to the item grid");
  expand->fallthrough();
  expand->add_option("--campaign", expand_opt.campaign, "campaign CSV")->required();
  expand->add_option("--vocab", expand_opt.vocab, "label vocabulary, one name per line")
      ->required();

  AlphaOptions alpha_opt;
  CLI::App* alpha = app.add_subcommand("alpha", "inter-annotator agreement");
  alpha->fallthrough();
  alpha->add_option("--input", alpha_opt.input, "item matrix CSV")->required();
  alpha->add_option("--vocab", alpha_opt.vocab, "label vocabulary");
  alpha->add_flag("--by-class", alpha_opt.by_class, "one report per label plus overall");
  alpha->add_option("--competence", alpha_opt.competence, "competence CSV for a sweep");
  alpha->add_option("--thresholds", alpha_opt.thresholds, "ascending sweep thresholds")
      ->delimiter(',');

  MaceOptions mace_opt;
  CLI::App* mace = app.add_subcommand("mace", "fit the competence model");
  mace->fallthrough();
  mace->add_option("--input", mace_opt.input, "item matrix CSV")->required();
  mace->add_option("--vocab", mace_opt.vocab, "label vocabulary");
  mace->add_option("--restarts", mace_opt.flags.restarts, "EM restarts")
      ->capture_default_str();
  mace->add_option("--iterations", mace_opt.flags.iterations, "max EM iterations per restart")
      ->capture_default_str();
  mace->add_option("--tolerance", mace_opt.flags.tolerance, "convergence tolerance")
      ->capture_default_str();
  mace->add_option("--smoothing", mace_opt.flags.smoothing, "additive count smoothing")
      ->capture_default_str();
  CLI::Option* keep_opt =
      mace->add_option("--keep-percent", mace_opt.keep_percent,
                       "keep only the most confident P% of items");

  AggregateOptions aggregate_opt;
  CLI::App* aggregate = app.add_subcommand("aggregate", "derive candidate ground truth");
  aggregate->fallthrough();
  aggregate->add_option("--input", aggregate_opt.input, "item matrix CSV")->required();
  aggregate->add_option("--vocab", aggregate_opt.vocab, "label vocabulary");
  aggregate
      ->add_option("--method", aggregate_opt.method, "union, majority, mace or mace@P")
      ->required();
  aggregate->add_option("--restarts", aggregate_opt.flags.restarts, "EM restarts")
      ->capture_default_str();
  aggregate
      ->add_option("--iterations", aggregate_opt.flags.iterations,
                   "max EM iterations per restart")
      ->capture_default_str();
  aggregate->add_option("--tolerance", aggregate_opt.flags.tolerance, "convergence tolerance")
      ->capture_default_str();
  aggregate->add_option("--smoothing", aggregate_opt.flags.smoothing, "additive smoothing")
      ->capture_default_str();

  FilterOptions filter_opt;
  CLI::App* filter = app.add_subcommand("filter", "drop annotator columns");
  filter->fallthrough();
  filter->add_option("--input", filter_opt.input, "item matrix CSV")->required();
  filter->add_option("--vocab", filter_opt.vocab, "label vocabulary");
  filter->add_option("--competence", filter_opt.competence, "competence CSV");
  CLI::Option* min_theta_opt =
      filter->add_option("--min-theta", filter_opt.min_theta, "keep competence >= this");
  filter->add_option("--keep", filter_opt.keep, "explicit annotator ids to keep")
      ->delimiter(',');

  SimulateOptions simulate_opt;
  CLI::App* simulate = app.add_subcommand("simulate", "draw a synthetic campaign");
  simulate->fallthrough();
  simulate->add_option("--spec", simulate_opt.spec, "campaign spec JSON");
  simulate->add_flag("--spammers-preset", simulate_opt.spammers_preset,
                     "zero-competence population");
  simulate->add_option("--annotators", simulate_opt.annotators, "preset: annotator count")
      ->capture_default_str();
  simulate
      ->add_option("--files-per-annotator", simulate_opt.files_per_annotator,
                   "preset: files per annotator")
      ->capture_default_str();
  simulate->add_option("--files", simulate_opt.files, "preset: file count")
      ->capture_default_str();
  simulate->add_option("--labels", simulate_opt.labels, "preset: label count")
      ->capture_default_str();

  ReportOptions report_opt;
  CLI::App* report = app.add_subcommand("report", "full analysis bundle");
  report->fallthrough();
  report->add_option("--input", report_opt.input, "item matrix CSV")->required();
  report->add_option("--vocab", report_opt.vocab, "label vocabulary");
  report->add_option("--competence", report_opt.competence,
                     "competence CSV (default: estimate via the model)");
  report->add_option("--truth", report_opt.truth, "planted truth CSV for recovery accuracy");
  report->add_option("--thresholds", report_opt.thresholds, "class-table thresholds")
      ->delimiter(',')
      ->capture_default_str();
  report->add_option("--sweep-thresholds", report_opt.sweep, "sweep grid (default 0..1/0.05)")
      ->delimiter(',');
  report->add_option("--keep-percent", report_opt.keep_percent, "confidence cut for mace@P")
      ->capture_default_str();
  report->add_option("--restarts", report_opt.flags.restarts, "EM restarts")
      ->capture_default_str();
  report->add_option("--iterations", report_opt.flags.iterations, "max EM iterations")
      ->capture_default_str();
  report->add_option("--tolerance", report_opt.flags.tolerance, "convergence tolerance")
      ->capture_default_str();
  report->add_option("--smoothing", report_opt.flags.smoothing, "additive smoothing")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  global.has_seed = seed_opt->count() > 0;
  mace_opt.has_keep_percent = keep_opt->count() > 0;
  filter_opt.has_min_theta = min_theta_opt->count() > 0;

  try {
    if (*expand) return cmd_expand(global, expand_opt);
    if (*alpha) return cmd_alpha(global, alpha_opt);
    if (*mace) return cmd_mace(global, mace_opt);
    if (*aggregate) return cmd_aggregate(global, aggregate_opt);
    if (*filter) return cmd_filter(global, filter_opt);
    if (*simulate) return cmd_simulate(global, simulate_opt);
    if (*report) return cmd_report(global, report_opt);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
