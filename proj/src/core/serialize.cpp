#include "core/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "core/error.hpp"
#include "core/text.hpp"

namespace annrel {
namespace {

void set_optional(ordered_json& obj, const char* key, const std::optional<double>& value) {
  if (value.has_value()) {
    obj[key] = *value;
  } else {
    obj[key] = nullptr;
  }
}

std::string optional_field(const std::optional<double>& value) {
  return value.has_value() ? format_double(*value) : std::string();
}

const nlohmann::json& require_field(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string("spec: missing field \"") + key + "\"");
  return *it;
}

double number_field(const nlohmann::json& value, const char* key) {
  if (!value.is_number()) {
    throw ParseError(std::string("spec: field \"") + key + "\" must be a number");
  }
  return value.get<double>();
}

std::uint64_t uint_field(const nlohmann::json& value, const char* key) {
  if (!value.is_number_unsigned()) {
    throw ParseError(std::string("spec: field \"") + key +
                     "\" must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

std::array<double, 2> spam_dist_field(const nlohmann::json& value) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    throw ParseError("spec: \"spam_dist\" must be an array of two numbers");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

}  // namespace

ordered_json alpha_report_json(const AlphaReport& report) {
  ordered_json obj;
  obj["scope"] = report.scope;
  set_optional(obj, "alpha", report.alpha);
  obj["reason"] = alpha_reason_name(report.reason);
  set_optional(obj, "d_o", report.observed_disagreement);
  set_optional(obj, "d_e", report.expected_disagreement);
  obj["n"] = report.coincidence.total;
  obj["units_used"] = report.coincidence.units_used;
  obj["excluded_units"] = report.coincidence.excluded_units;
  return obj;
}

ordered_json alpha_reports_json(const std::vector<AlphaReport>& reports) {
  ordered_json obj;
  obj["reports"] = ordered_json::array();
  for (const AlphaReport& report : reports) {
    obj["reports"].push_back(alpha_report_json(report));
  }
  return obj;
}

void write_alpha_reports_csv(const std::vector<AlphaReport>& reports, std::ostream& out) {
  out << "scope,alpha,reason,d_o,d_e,n,units_used,excluded_units\n";
  for (const AlphaReport& r : reports) {
    out << r.scope << ',' << optional_field(r.alpha) << ',' << alpha_reason_name(r.reason)
        << ',' << optional_field(r.observed_disagreement) << ','
        << optional_field(r.expected_disagreement) << ',' << format_double(r.coincidence.total)
        << ',' << r.coincidence.units_used << ',' << r.coincidence.excluded_units << '\n';
  }
}

ordered_json sweep_json(const std::vector<ThresholdAlpha>& sweep) {
  ordered_json obj;
  obj["sweep"] = ordered_json::array();
  for (const ThresholdAlpha& point : sweep) {
    ordered_json entry;
    entry["threshold"] = point.threshold;
    entry["annotators_kept"] = point.annotators_kept;
    set_optional(entry, "alpha", point.report.alpha);
    entry["reason"] = alpha_reason_name(point.report.reason);
    entry["n"] = point.report.coincidence.total;
    entry["units_used"] = point.report.coincidence.units_used;
    entry["excluded_units"] = point.report.coincidence.excluded_units;
    obj["sweep"].push_back(std::move(entry));
  }
  return obj;
}

void write_sweep_csv(const std::vector<ThresholdAlpha>& sweep, std::ostream& out) {
  out << "threshold,annotators_kept,alpha,reason\n";
  for (const ThresholdAlpha& point : sweep) {
    out << format_double(point.threshold) << ',' << point.annotators_kept << ','
        << optional_field(point.report.alpha) << ',' << alpha_reason_name(point.report.reason)
        << '\n';
  }
}

ordered_json model_json(const MaceModel& model, const GroundTruthEstimate& estimate) {
  if (estimate.size() != model.items.size()) {
    throw InvalidArgument("estimate does not match the model's items");
  }
  ordered_json obj;
  obj["seed"] = model.config.seed;
  obj["restarts"] = model.config.restarts;
  obj["best_restart"] = model.best_restart;
  obj["iterations_used"] = model.iterations_used;
  obj["final_log_likelihood"] = model.log_likelihood;
  ordered_json config;
  config["max_iterations"] = model.config.max_iterations;
  config["tolerance"] = model.config.tolerance;
  config["smoothing_delta"] = model.config.smoothing_delta;
  obj["config"] = std::move(config);
  obj["restart_log_likelihoods"] = ordered_json::array();
  for (const RestartSummary& run : model.restarts) {
    obj["restart_log_likelihoods"].push_back(run.final_log_likelihood);
  }
  obj["annotators"] = ordered_json::array();
  for (std::size_t j = 0; j < model.annotator_ids.size(); ++j) {
    ordered_json ann;
    ann["id"] = model.annotator_ids[j];
    ann["theta"] = model.theta[j];
    ann["xi"] = {model.xi[j][0], model.xi[j][1]};
    obj["annotators"].push_back(std::move(ann));
  }
  obj["items"] = ordered_json::array();
  for (std::size_t i = 0; i < model.items.size(); ++i) {
    ordered_json item;
    item["file"] = model.items[i].file_id;
    item["label"] = model.items[i].label;
    item["posterior"] = model.posterior_positive[i];
    item["decision"] = int(estimate.decisions[i]);
    item["confidence"] = estimate.confidence[i];
    item["kept"] = bool(estimate.kept[i]);
    obj["items"].push_back(std::move(item));
  }
  return obj;
}

void write_labels_csv(const GroundTruthEstimate& estimate, std::ostream& out) {
  out << "file_id,label,decision,confidence,kept\n";
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    out << estimate.items[i].file_id << ',' << estimate.items[i].label << ','
        << int(estimate.decisions[i]) << ',' << format_double(estimate.confidence[i]) << ','
        << int(estimate.kept[i]) << '\n';
  }
}

namespace {

std::vector<std::size_t> order_by_count(const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  return order;
}

}  // namespace

void write_stats_csv(const LabelStatistics& stats, std::ostream& out) {
  out << "label,count\n";
  for (const std::size_t idx : order_by_count(stats.per_label_counts)) {
    out << stats.labels[idx] << ',' << stats.per_label_counts[idx] << '\n';
  }
}

ordered_json histogram_json(const LabelStatistics& stats) {
  ordered_json obj;
  obj["method"] = stats.method;
  obj["mean_labels_per_file"] = stats.mean_labels_per_file;
  obj["histogram"] = stats.histogram;
  return obj;
}

ordered_json histogram_series_json(const std::vector<LabelStatistics>& series) {
  ordered_json obj;
  obj["series"] = ordered_json::array();
  for (const LabelStatistics& stats : series) {
    obj["series"].push_back(histogram_json(stats));
  }
  return obj;
}

void write_method_table_csv(const std::vector<LabelStatistics>& series, std::ostream& out) {
  if (series.empty()) throw InvalidArgument("no statistics to tabulate");
  for (const LabelStatistics& stats : series) {
    if (stats.labels != series[0].labels) {
      throw InvalidArgument("statistics cover different vocabularies");
    }
  }
  out << "label";
  for (const LabelStatistics& stats : series) out << ',' << stats.method;
  out << '\n';
  for (const std::size_t idx : order_by_count(series[0].per_label_counts)) {
    out << series[0].labels[idx];
    for (const LabelStatistics& stats : series) out << ',' << stats.per_label_counts[idx];
    out << '\n';
  }
}

void write_class_threshold_csv(const std::vector<std::string>& column_names,
                               const std::vector<std::vector<AlphaReport>>& sweeps,
                               std::ostream& out) {
  if (sweeps.empty() || column_names.size() != sweeps.size()) {
    throw InvalidArgument("column names must match the sweep count");
  }
  for (const auto& sweep : sweeps) {
    if (sweep.size() != sweeps[0].size()) {
      throw InvalidArgument("sweeps cover different class lists");
    }
  }
  out << "class";
  for (const std::string& name : column_names) out << ',' << name;
  out << '\n';
  for (std::size_t row = 0; row < sweeps[0].size(); ++row) {
    out << sweeps[0][row].scope;
    for (const auto& sweep : sweeps) out << ',' << optional_field(sweep[row].alpha);
    out << '\n';
  }
}

RecoveryRow recovery_against_truth(const GroundTruthEstimate& estimate,
                                   const TruthTable& truth) {
  RecoveryRow row;
  row.method = estimate.method;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if (!estimate.kept[i]) continue;
    const auto value = truth.value(estimate.items[i].file_id, estimate.items[i].label);
    if (!value.has_value()) {
      throw InvalidArgument("truth table does not cover item (" + estimate.items[i].file_id +
                            ", " + estimate.items[i].label + ")");
    }
    ++row.items;
    if (*value == estimate.decisions[i]) ++row.correct;
  }
  return row;
}

void write_recovery_csv(const std::vector<RecoveryRow>& rows, std::ostream& out) {
  out << "method,items,correct,accuracy\n";
  for (const RecoveryRow& row : rows) {
    const double accuracy = row.items > 0 ? double(row.correct) / double(row.items) : 0.0;
    out << row.method << ',' << row.items << ',' << row.correct << ','
        << format_double(accuracy) << '\n';
  }
}

void write_truth_csv(const std::vector<ItemId>& items, const std::vector<std::uint8_t>& values,
                     std::ostream& out) {
  if (items.size() != values.size()) {
    throw InvalidArgument("item and value counts differ");
  }
  out << "file_id,label,value\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out << items[i].file_id << ',' << items[i].label << ',' << int(values[i]) << '\n';
  }
}

CampaignSpec campaign_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("spec: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "num_files" && key != "labels" && key != "files_per_annotator" &&
        key != "seed" && key != "truth_prevalence" && key != "annotators" &&
        key != "groups") {
      throw ParseError("spec: unknown field \"" + key + "\"");
    }
  }

  CampaignSpec spec;
  spec.num_files = uint_field(require_field(doc, "num_files"), "num_files");
  spec.files_per_annotator =
      uint_field(require_field(doc, "files_per_annotator"), "files_per_annotator");
  if (const auto it = doc.find("seed"); it != doc.end()) {
    spec.seed = uint_field(*it, "seed");
  }

  const nlohmann::json& labels = require_field(doc, "labels");
  if (!labels.is_array() || labels.empty()) {
    throw ParseError("spec: \"labels\" must be a non-empty array");
  }
  std::vector<std::string> names;
  for (const auto& entry : labels) {
    if (!entry.is_string()) throw ParseError("spec: label names must be strings");
    names.push_back(entry.get<std::string>());
  }
  spec.vocab = LabelVocabulary(std::move(names));

  if (const auto it = doc.find("truth_prevalence"); it != doc.end()) {
    if (it->is_number()) {
      spec.truth_prevalence.assign(spec.vocab.size(),
                                   number_field(*it, "truth_prevalence"));
    } else if (it->is_object()) {
      spec.truth_prevalence.assign(spec.vocab.size(), 0.5);
      for (const auto& [label, value] : it->items()) {
        const auto idx = spec.vocab.index_of(label);
        if (!idx) throw ParseError("spec: prevalence for unknown label \"" + label + "\"");
        spec.truth_prevalence[*idx] = number_field(value, "truth_prevalence");
      }
    } else {
      throw ParseError("spec: \"truth_prevalence\" must be a number or an object");
    }
  }

  if (const auto it = doc.find("annotators"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("spec: \"annotators\" must be an array");
    for (const auto& entry : *it) {
      if (!entry.is_object()) throw ParseError("spec: annotator entries must be objects");
      AnnotatorSpec ann;
      const nlohmann::json& id = require_field(entry, "id");
      if (!id.is_string()) throw ParseError("spec: annotator \"id\" must be a string");
      ann.id = id.get<std::string>();
      ann.competence = number_field(require_field(entry, "competence"), "competence");
      if (const auto dist = entry.find("spam_dist"); dist != entry.end()) {
        ann.spam_dist = spam_dist_field(*dist);
      }
      spec.annotators.push_back(std::move(ann));
    }
  }
  if (const auto it = doc.find("groups"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("spec: \"groups\" must be an array");
    for (const auto& entry : *it) {
      if (!entry.is_object()) throw ParseError("spec: group entries must be objects");
      const std::uint64_t count = uint_field(require_field(entry, "count"), "count");
      const nlohmann::json& prefix = require_field(entry, "prefix");
      if (!prefix.is_string()) throw ParseError("spec: group \"prefix\" must be a string");
      const double competence =
          number_field(require_field(entry, "competence"), "competence");
      std::array<double, 2> spam_dist{0.5, 0.5};
      if (const auto dist = entry.find("spam_dist"); dist != entry.end()) {
        spam_dist = spam_dist_field(*dist);
      }
      for (std::string& id : sequential_ids(prefix.get<std::string>(), count)) {
        spec.annotators.push_back(AnnotatorSpec{std::move(id), competence, spam_dist});
      }
    }
  }

  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
  return spec;
}

CampaignSpec campaign_spec_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("spec: ") + err.what());
  }
  return campaign_spec_from_json(doc);
}

ordered_json campaign_spec_json(const CampaignSpec& spec) {
  ordered_json obj;
  obj["num_files"] = spec.num_files;
  obj["labels"] = spec.vocab.labels();
  obj["files_per_annotator"] = spec.files_per_annotator;
  obj["seed"] = spec.seed;
  ordered_json prevalence = ordered_json::object();
  for (std::size_t l = 0; l < spec.vocab.size(); ++l) {
    prevalence[spec.vocab.label(l)] = spec.prevalence(l);
  }
  obj["truth_prevalence"] = std::move(prevalence);
  obj["annotators"] = ordered_json::array();
  for (const AnnotatorSpec& ann : spec.annotators) {
    ordered_json entry;
    entry["id"] = ann.id;
    entry["competence"] = ann.competence;
    entry["spam_dist"] = {ann.spam_dist[0], ann.spam_dist[1]};
    obj["annotators"].push_back(std::move(entry));
  }
  return obj;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), std::streamsize(content.size()));
  out.flush();
  if (!out.good()) throw IoError("write failed for " + path);
}

std::string json_text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace annrel
