#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/agreement.hpp"
#include "core/aggregate.hpp"
#include "core/csv_io.hpp"
#include "core/estimate.hpp"
#include "core/mace.hpp"
#include "core/simulate.hpp"

namespace annrel {

using ordered_json = nlohmann::ordered_json;

// JSON builders and CSV writers for every artifact the toolkit emits. All
// numbers go through shortest-round-trip formatting (nlohmann uses the same
// scheme internally), so identical values always serialize identically.

ordered_json alpha_report_json(const AlphaReport& report);
ordered_json alpha_reports_json(const std::vector<AlphaReport>& reports);
void write_alpha_reports_csv(const std::vector<AlphaReport>& reports, std::ostream& out);

ordered_json sweep_json(const std::vector<ThresholdAlpha>& sweep);
void write_sweep_csv(const std::vector<ThresholdAlpha>& sweep, std::ostream& out);

/// Run metadata, per-annotator parameters and per-item posteriors. The
/// estimate must be the model's prediction (optionally thresholded) and
/// supplies decisions, confidences and kept flags.
ordered_json model_json(const MaceModel& model, const GroundTruthEstimate& estimate);

/// `file_id,label,decision,confidence,kept`
void write_labels_csv(const GroundTruthEstimate& estimate, std::ostream& out);

/// `label,count` sorted by count descending, ties in vocabulary order.
void write_stats_csv(const LabelStatistics& stats, std::ostream& out);

ordered_json histogram_json(const LabelStatistics& stats);
/// Several methods' histograms as one set of data series.
ordered_json histogram_series_json(const std::vector<LabelStatistics>& series);

/// Cross-method count table: one row per label sorted by the first method's
/// count descending, one column per method.
void write_method_table_csv(const std::vector<LabelStatistics>& series, std::ostream& out);

/// Class rows x threshold columns of alpha values; `sweeps[k]` holds the
/// by-class reports after filtering at `thresholds[k]`.
void write_class_threshold_csv(const std::vector<std::string>& column_names,
                               const std::vector<std::vector<AlphaReport>>& sweeps,
                               std::ostream& out);

/// `method,items,correct,accuracy` (mace@n counts kept items only).
struct RecoveryRow {
  std::string method;
  std::size_t items = 0;
  std::size_t correct = 0;
};
RecoveryRow recovery_against_truth(const GroundTruthEstimate& estimate, const TruthTable& truth);
void write_recovery_csv(const std::vector<RecoveryRow>& rows, std::ostream& out);

/// `file_id,label,value` in item order.
void write_truth_csv(const std::vector<ItemId>& items, const std::vector<std::uint8_t>& values,
                     std::ostream& out);

/// Campaign spec JSON: explicit "annotators" array and/or "groups" shorthand
/// ({count, competence, prefix, spam_dist}); "truth_prevalence" is a scalar
/// or a label -> value map. Semantic problems throw ParseError.
CampaignSpec campaign_spec_from_json(const nlohmann::json& doc);
CampaignSpec campaign_spec_from_file(const std::string& path);
/// Canonical expanded form (explicit annotator list, per-label prevalence).
ordered_json campaign_spec_json(const CampaignSpec& spec);

void write_text_file(const std::string& path, const std::string& content);
std::string json_text(const ordered_json& doc);

}  // namespace annrel
