#include "annrel.h"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core/aggregate.hpp"
#include "core/agreement.hpp"
#include "core/csv_io.hpp"
#include "core/error.hpp"
#include "core/estimate.hpp"
#include "core/mace.hpp"
#include "core/matrix.hpp"
#include "core/serialize.hpp"
#include "core/simulate.hpp"
#include "core/vocab.hpp"

struct annrel_vocab {
  annrel::LabelVocabulary impl;
};
struct annrel_matrix {
  std::shared_ptr<const annrel::AnnotationMatrix> impl;
};
struct annrel_reports {
  std::vector<annrel::AlphaReport> impl;
};
struct annrel_sweep {
  std::vector<annrel::ThresholdAlpha> impl;
};
struct annrel_model {
  annrel::MaceModel impl;
};
struct annrel_estimate {
  annrel::GroundTruthEstimate impl;
};
struct annrel_stats {
  annrel::LabelStatistics impl;
};
struct annrel_competence {
  std::vector<std::pair<std::string, double>> impl;
};
struct annrel_truth {
  annrel::TruthTable impl;
};
struct annrel_spec {
  annrel::CampaignSpec impl;
};
struct annrel_campaign {
  std::shared_ptr<annrel::SyntheticCampaign> impl;
  std::vector<double> spam_fraction;
};

namespace {

thread_local std::string t_last_error;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
annrel_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    return ANNREL_OK;
  } catch (const annrel::IoError& e) {
    t_last_error = e.what();
    return ANNREL_ERR_IO;
  } catch (const annrel::ParseError& e) {
    t_last_error = e.what();
    return ANNREL_ERR_PARSE;
  } catch (const annrel::InvalidArgument& e) {
    t_last_error = e.what();
    return ANNREL_ERR_INVALID_ARGUMENT;
  } catch (const annrel::NumericError& e) {
    t_last_error = e.what();
    return ANNREL_ERR_NUMERIC;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return ANNREL_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return ANNREL_ERR_INTERNAL;
  }
}

annrel_status fail_invalid(const char* message) {
  t_last_error = message;
  return ANNREL_ERR_INVALID_ARGUMENT;
}

void fill_report(const annrel::AlphaReport& report, annrel_alpha_report* out) {
  out->defined = report.alpha.has_value() ? 1 : 0;
  out->reason = int(report.reason);
  out->alpha = report.alpha.value_or(kNan);
  out->d_o = report.observed_disagreement.value_or(kNan);
  out->d_e = report.expected_disagreement.value_or(kNan);
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < 2; ++k) out->o[c][k] = report.coincidence.o[c][k];
    out->marginal[c] = report.coincidence.marginal[c];
  }
  out->n = report.coincidence.total;
  out->units_used = report.coincidence.units_used;
  out->excluded_units = report.coincidence.excluded_units;
}

template <typename WriteFn>
void write_csv_artifact(const char* path, WriteFn&& write) {
  std::ostringstream buffer;
  write(buffer);
  annrel::write_text_file(path, buffer.str());
}

}  // namespace

extern "C" {

const char* annrel_version(void) { return "0.1.0"; }

const char* annrel_last_error(void) { return t_last_error.c_str(); }

/* ---- vocabulary ---- */

annrel_status annrel_vocab_read(const char* path, annrel_vocab** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] {
    *out = new annrel_vocab{annrel::LabelVocabulary::from_file(path)};
  });
}

annrel_status annrel_vocab_create(const char* const* names, size_t count, annrel_vocab** out) {
  if (!out || (count > 0 && !names)) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!names[i]) throw annrel::InvalidArgument("null label name");
      labels.emplace_back(names[i]);
    }
    *out = new annrel_vocab{annrel::LabelVocabulary(std::move(labels))};
  });
}

size_t annrel_vocab_size(const annrel_vocab* vocab) { return vocab ? vocab->impl.size() : 0; }

const char* annrel_vocab_label(const annrel_vocab* vocab, size_t index) {
  if (!vocab || index >= vocab->impl.size()) return nullptr;
  return vocab->impl.label(index).c_str();
}

void annrel_vocab_free(annrel_vocab* vocab) { delete vocab; }

/* ---- matrix ---- */

annrel_status annrel_matrix_from_campaign(const char* path, const annrel_vocab* vocab,
                                          annrel_matrix** out) {
  if (!path || !vocab || !out) return fail_invalid("null argument");
  return wrap([&] {
    auto records = annrel::parse_campaign_file(path, vocab->impl);
    *out = new annrel_matrix{std::make_shared<const annrel::AnnotationMatrix>(
        annrel::AnnotationMatrix::expand_to_items(records, vocab->impl))};
  });
}

annrel_status annrel_matrix_read(const char* path, const annrel_vocab* vocab,
                                 annrel_matrix** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] {
    std::optional<annrel::LabelVocabulary> optional_vocab;
    if (vocab) optional_vocab = vocab->impl;
    *out = new annrel_matrix{std::make_shared<const annrel::AnnotationMatrix>(
        annrel::read_items_csv_file(path, optional_vocab))};
  });
}

annrel_status annrel_matrix_write(const annrel_matrix* matrix, const char* path) {
  if (!matrix || !path) return fail_invalid("null argument");
  return wrap([&] { annrel::write_items_csv_file(*matrix->impl, path); });
}

size_t annrel_matrix_num_items(const annrel_matrix* matrix) {
  return matrix ? matrix->impl->num_items() : 0;
}

size_t annrel_matrix_num_annotators(const annrel_matrix* matrix) {
  return matrix ? matrix->impl->num_annotators() : 0;
}

size_t annrel_matrix_num_files(const annrel_matrix* matrix) {
  return matrix ? matrix->impl->num_files() : 0;
}

size_t annrel_matrix_num_cells(const annrel_matrix* matrix) {
  return matrix ? matrix->impl->num_cells() : 0;
}

const char* annrel_matrix_item_file(const annrel_matrix* matrix, size_t item) {
  if (!matrix || item >= matrix->impl->num_items()) return nullptr;
  return matrix->impl->item(item).file_id.c_str();
}

const char* annrel_matrix_item_label(const annrel_matrix* matrix, size_t item) {
  if (!matrix || item >= matrix->impl->num_items()) return nullptr;
  return matrix->impl->item(item).label.c_str();
}

const char* annrel_matrix_annotator(const annrel_matrix* matrix, size_t index) {
  if (!matrix || index >= matrix->impl->num_annotators()) return nullptr;
  return matrix->impl->annotator(index).c_str();
}

int annrel_matrix_cell(const annrel_matrix* matrix, size_t item, size_t annotator) {
  if (!matrix || item >= matrix->impl->num_items() ||
      annotator >= matrix->impl->num_annotators()) {
    t_last_error = "cell index out of range";
    return -2;
  }
  return matrix->impl->cell(item, annotator);
}

size_t annrel_matrix_row_size(const annrel_matrix* matrix, size_t item) {
  if (!matrix || item >= matrix->impl->num_items()) return size_t(-1);
  return matrix->impl->responses_for(item);
}

annrel_status annrel_matrix_filter(const annrel_matrix* matrix, const char* const* keep,
                                   size_t count, annrel_matrix** out) {
  if (!matrix || !out || (count > 0 && !keep)) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::string> ids;
    ids.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!keep[i]) throw annrel::InvalidArgument("null annotator id");
      ids.emplace_back(keep[i]);
    }
    *out = new annrel_matrix{std::make_shared<const annrel::AnnotationMatrix>(
        matrix->impl->filter_annotators(ids))};
  });
}

annrel_status annrel_matrix_subset(const annrel_matrix* matrix, const char* label,
                                   annrel_matrix** out) {
  if (!matrix || !label || !out) return fail_invalid("null argument");
  return wrap([&] {
    *out = new annrel_matrix{std::make_shared<const annrel::AnnotationMatrix>(
        matrix->impl->subset_by_label(label))};
  });
}

void annrel_matrix_free(annrel_matrix* matrix) { delete matrix; }

/* ---- agreement ---- */

annrel_status annrel_alpha_overall(const annrel_matrix* matrix, annrel_alpha_report* out) {
  if (!matrix || !out) return fail_invalid("null argument");
  return wrap([&] { fill_report(annrel::nominal_alpha(*matrix->impl), out); });
}

annrel_status annrel_alpha_closed_form(const annrel_matrix* matrix, int* defined,
                                       double* alpha) {
  if (!matrix || !defined || !alpha) return fail_invalid("null argument");
  return wrap([&] {
    const auto value = annrel::alpha_closed_form(annrel::coincidences(*matrix->impl));
    *defined = value.has_value() ? 1 : 0;
    *alpha = value.value_or(kNan);
  });
}

annrel_status annrel_alpha_reports(const annrel_matrix* matrix, int by_class,
                                   annrel_reports** out) {
  if (!matrix || !out) return fail_invalid("null argument");
  return wrap([&] {
    if (by_class) {
      *out = new annrel_reports{annrel::alpha_by_class(*matrix->impl)};
    } else {
      *out = new annrel_reports{{annrel::nominal_alpha(*matrix->impl)}};
    }
  });
}

size_t annrel_reports_count(const annrel_reports* reports) {
  return reports ? reports->impl.size() : 0;
}

const char* annrel_reports_scope(const annrel_reports* reports, size_t index) {
  if (!reports || index >= reports->impl.size()) return nullptr;
  return reports->impl[index].scope.c_str();
}

annrel_status annrel_reports_get(const annrel_reports* reports, size_t index,
                                 annrel_alpha_report* out) {
  if (!reports || !out) return fail_invalid("null argument");
  if (index >= reports->impl.size()) return fail_invalid("report index out of range");
  fill_report(reports->impl[index], out);
  return ANNREL_OK;
}

annrel_status annrel_reports_write_json(const annrel_reports* reports, const char* path) {
  if (!reports || !path) return fail_invalid("null argument");
  return wrap([&] {
    annrel::write_text_file(path, annrel::json_text(annrel::alpha_reports_json(reports->impl)));
  });
}

annrel_status annrel_reports_write_csv(const annrel_reports* reports, const char* path) {
  if (!reports || !path) return fail_invalid("null argument");
  return wrap([&] {
    write_csv_artifact(path,
                       [&](std::ostream& out) { write_alpha_reports_csv(reports->impl, out); });
  });
}

void annrel_reports_free(annrel_reports* reports) { delete reports; }

annrel_status annrel_alpha_sweep(const annrel_matrix* matrix,
                                 const annrel_competence* competence,
                                 const double* thresholds, size_t count, annrel_sweep** out) {
  if (!matrix || !competence || !out || (count > 0 && !thresholds)) {
    return fail_invalid("null argument");
  }
  return wrap([&] {
    std::vector<double> grid(thresholds, thresholds + count);
    *out = new annrel_sweep{
        annrel::alpha_threshold_sweep(*matrix->impl, competence->impl, grid)};
  });
}

size_t annrel_sweep_count(const annrel_sweep* sweep) { return sweep ? sweep->impl.size() : 0; }

annrel_status annrel_sweep_get(const annrel_sweep* sweep, size_t index, double* threshold,
                               size_t* annotators_kept, annrel_alpha_report* report) {
  if (!sweep) return fail_invalid("null argument");
  if (index >= sweep->impl.size()) return fail_invalid("sweep index out of range");
  const annrel::ThresholdAlpha& point = sweep->impl[index];
  if (threshold) *threshold = point.threshold;
  if (annotators_kept) *annotators_kept = point.annotators_kept;
  if (report) fill_report(point.report, report);
  return ANNREL_OK;
}

annrel_status annrel_sweep_write_json(const annrel_sweep* sweep, const char* path) {
  if (!sweep || !path) return fail_invalid("null argument");
  return wrap([&] {
    annrel::write_text_file(path, annrel::json_text(annrel::sweep_json(sweep->impl)));
  });
}

annrel_status annrel_sweep_write_csv(const annrel_sweep* sweep, const char* path) {
  if (!sweep || !path) return fail_invalid("null argument");
  return wrap([&] {
    write_csv_artifact(path, [&](std::ostream& out) { write_sweep_csv(sweep->impl, out); });
  });
}

void annrel_sweep_free(annrel_sweep* sweep) { delete sweep; }

annrel_status annrel_class_table_write_csv(const annrel_reports* const* columns,
                                           const char* const* column_names, size_t count,
                                           const char* path) {
  if (!columns || !column_names || !path || count == 0) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::vector<annrel::AlphaReport>> sweeps;
    std::vector<std::string> names;
    sweeps.reserve(count);
    names.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!columns[i] || !column_names[i]) throw annrel::InvalidArgument("null column");
      sweeps.push_back(columns[i]->impl);
      names.emplace_back(column_names[i]);
    }
    write_csv_artifact(path, [&](std::ostream& out) {
      annrel::write_class_threshold_csv(names, sweeps, out);
    });
  });
}

/* ---- mace ---- */

void annrel_mace_config_init(annrel_mace_config* config) {
  if (!config) return;
  const annrel::MaceConfig defaults;
  config->restarts = defaults.restarts;
  config->max_iterations = defaults.max_iterations;
  config->tolerance = defaults.tolerance;
  config->smoothing_delta = defaults.smoothing_delta;
  config->seed = defaults.seed;
}

annrel_status annrel_mace_fit(const annrel_matrix* matrix, const annrel_mace_config* config,
                              annrel_model** out) {
  if (!matrix || !config || !out) return fail_invalid("null argument");
  return wrap([&] {
    annrel::MaceConfig cfg;
    cfg.restarts = size_t(config->restarts);
    cfg.max_iterations = size_t(config->max_iterations);
    cfg.tolerance = config->tolerance;
    cfg.smoothing_delta = config->smoothing_delta;
    cfg.seed = config->seed;
    *out = new annrel_model{annrel::em_fit(*matrix->impl, cfg)};
  });
}

annrel_status annrel_log_likelihood(const annrel_matrix* matrix, const double* theta,
                                    const double* xi, size_t num_annotators, double* out) {
  if (!matrix || !theta || !xi || !out) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<double> theta_vec(theta, theta + num_annotators);
    std::vector<std::array<double, 2>> xi_vec(num_annotators);
    for (size_t j = 0; j < num_annotators; ++j) xi_vec[j] = {xi[2 * j], xi[2 * j + 1]};
    *out = annrel::log_likelihood(*matrix->impl, theta_vec, xi_vec);
  });
}

size_t annrel_model_num_annotators(const annrel_model* model) {
  return model ? model->impl.annotator_ids.size() : 0;
}

size_t annrel_model_num_items(const annrel_model* model) {
  return model ? model->impl.items.size() : 0;
}

const char* annrel_model_annotator_id(const annrel_model* model, size_t index) {
  if (!model || index >= model->impl.annotator_ids.size()) return nullptr;
  return model->impl.annotator_ids[index].c_str();
}

annrel_status annrel_model_theta(const annrel_model* model, size_t index, double* out) {
  if (!model || !out) return fail_invalid("null argument");
  if (index >= model->impl.theta.size()) return fail_invalid("annotator index out of range");
  *out = model->impl.theta[index];
  return ANNREL_OK;
}

annrel_status annrel_model_xi(const annrel_model* model, size_t index, double out[2]) {
  if (!model || !out) return fail_invalid("null argument");
  if (index >= model->impl.xi.size()) return fail_invalid("annotator index out of range");
  out[0] = model->impl.xi[index][0];
  out[1] = model->impl.xi[index][1];
  return ANNREL_OK;
}

annrel_status annrel_model_posterior(const annrel_model* model, size_t item, double* out) {
  if (!model || !out) return fail_invalid("null argument");
  if (item >= model->impl.posterior_positive.size()) {
    return fail_invalid("item index out of range");
  }
  *out = model->impl.posterior_positive[item];
  return ANNREL_OK;
}

size_t annrel_model_row_size(const annrel_model* model, size_t item) {
  if (!model || item >= model->impl.expected_spam.size()) return size_t(-1);
  return model->impl.expected_spam[item].size();
}

annrel_status annrel_model_expected_spam(const annrel_model* model, size_t item, size_t slot,
                                         double* out) {
  if (!model || !out) return fail_invalid("null argument");
  if (item >= model->impl.expected_spam.size() ||
      slot >= model->impl.expected_spam[item].size()) {
    return fail_invalid("response index out of range");
  }
  *out = model->impl.expected_spam[item][slot];
  return ANNREL_OK;
}

double annrel_model_log_likelihood(const annrel_model* model) {
  return model ? model->impl.log_likelihood : kNan;
}

size_t annrel_model_iterations(const annrel_model* model) {
  return model ? model->impl.iterations_used : 0;
}

size_t annrel_model_best_restart(const annrel_model* model) {
  return model ? model->impl.best_restart : 0;
}

size_t annrel_model_restart_count(const annrel_model* model) {
  return model ? model->impl.restarts.size() : 0;
}

size_t annrel_model_trace_length(const annrel_model* model, size_t restart) {
  if (!model || restart >= model->impl.restarts.size()) return 0;
  return model->impl.restarts[restart].log_likelihood_trace.size();
}

annrel_status annrel_model_trace(const annrel_model* model, size_t restart, size_t iteration,
                                 double* log_likelihood, double* objective) {
  if (!model) return fail_invalid("null argument");
  if (restart >= model->impl.restarts.size()) return fail_invalid("restart out of range");
  const annrel::RestartSummary& run = model->impl.restarts[restart];
  if (iteration >= run.log_likelihood_trace.size()) {
    return fail_invalid("iteration out of range");
  }
  if (log_likelihood) *log_likelihood = run.log_likelihood_trace[iteration];
  if (objective) *objective = run.objective_trace[iteration];
  return ANNREL_OK;
}

annrel_status annrel_model_restart_ll(const annrel_model* model, size_t restart, double* out) {
  if (!model || !out) return fail_invalid("null argument");
  if (restart >= model->impl.restarts.size()) return fail_invalid("restart out of range");
  *out = model->impl.restarts[restart].final_log_likelihood;
  return ANNREL_OK;
}

annrel_status annrel_mace_predict(const annrel_model* model, annrel_estimate** out) {
  if (!model || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_estimate{annrel::predict(model->impl)}; });
}

annrel_status annrel_model_competence(const annrel_model* model, annrel_competence** out) {
  if (!model || !out) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(model->impl.annotator_ids.size());
    for (size_t j = 0; j < model->impl.annotator_ids.size(); ++j) {
      rows.emplace_back(model->impl.annotator_ids[j], model->impl.theta[j]);
    }
    *out = new annrel_competence{std::move(rows)};
  });
}

annrel_status annrel_model_write_json(const annrel_model* model,
                                      const annrel_estimate* estimate, const char* path) {
  if (!model || !estimate || !path) return fail_invalid("null argument");
  return wrap([&] {
    annrel::write_text_file(
        path, annrel::json_text(annrel::model_json(model->impl, estimate->impl)));
  });
}

void annrel_model_free(annrel_model* model) { delete model; }

/* ---- estimates ---- */

annrel_status annrel_union_vote(const annrel_matrix* matrix, annrel_estimate** out) {
  if (!matrix || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_estimate{annrel::union_vote(*matrix->impl)}; });
}

annrel_status annrel_majority_vote(const annrel_matrix* matrix, annrel_estimate** out) {
  if (!matrix || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_estimate{annrel::majority_vote(*matrix->impl)}; });
}

annrel_status annrel_estimate_threshold(const annrel_estimate* estimate, double keep_percent,
                                        annrel_estimate** out) {
  if (!estimate || !out) return fail_invalid("null argument");
  return wrap([&] {
    *out = new annrel_estimate{annrel::threshold_at(estimate->impl, keep_percent)};
  });
}

size_t annrel_estimate_size(const annrel_estimate* estimate) {
  return estimate ? estimate->impl.size() : 0;
}

const char* annrel_estimate_method(const annrel_estimate* estimate) {
  return estimate ? estimate->impl.method.c_str() : nullptr;
}

const char* annrel_estimate_file(const annrel_estimate* estimate, size_t item) {
  if (!estimate || item >= estimate->impl.size()) return nullptr;
  return estimate->impl.items[item].file_id.c_str();
}

const char* annrel_estimate_label(const annrel_estimate* estimate, size_t item) {
  if (!estimate || item >= estimate->impl.size()) return nullptr;
  return estimate->impl.items[item].label.c_str();
}

annrel_status annrel_estimate_get(const annrel_estimate* estimate, size_t item, int* decision,
                                  double* confidence, int* kept) {
  if (!estimate) return fail_invalid("null argument");
  if (item >= estimate->impl.size()) return fail_invalid("item index out of range");
  if (decision) *decision = estimate->impl.decisions[item];
  if (confidence) *confidence = estimate->impl.confidence[item];
  if (kept) *kept = estimate->impl.kept[item];
  return ANNREL_OK;
}

annrel_status annrel_estimate_write_csv(const annrel_estimate* estimate, const char* path) {
  if (!estimate || !path) return fail_invalid("null argument");
  return wrap([&] {
    write_csv_artifact(path,
                       [&](std::ostream& out) { write_labels_csv(estimate->impl, out); });
  });
}

void annrel_estimate_free(annrel_estimate* estimate) { delete estimate; }

/* ---- statistics ---- */

annrel_status annrel_label_statistics(const annrel_estimate* estimate, annrel_stats** out) {
  if (!estimate || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_stats{annrel::label_statistics(estimate->impl)}; });
}

size_t annrel_stats_num_labels(const annrel_stats* stats) {
  return stats ? stats->impl.labels.size() : 0;
}

const char* annrel_stats_label(const annrel_stats* stats, size_t index) {
  if (!stats || index >= stats->impl.labels.size()) return nullptr;
  return stats->impl.labels[index].c_str();
}

annrel_status annrel_stats_count(const annrel_stats* stats, size_t index, uint64_t* out) {
  if (!stats || !out) return fail_invalid("null argument");
  if (index >= stats->impl.per_label_counts.size()) {
    return fail_invalid("label index out of range");
  }
  *out = stats->impl.per_label_counts[index];
  return ANNREL_OK;
}

double annrel_stats_mean_labels_per_file(const annrel_stats* stats) {
  return stats ? stats->impl.mean_labels_per_file : kNan;
}

size_t annrel_stats_histogram_size(const annrel_stats* stats) {
  return stats ? stats->impl.histogram.size() : 0;
}

annrel_status annrel_stats_histogram(const annrel_stats* stats, size_t index, uint64_t* out) {
  if (!stats || !out) return fail_invalid("null argument");
  if (index >= stats->impl.histogram.size()) return fail_invalid("bin index out of range");
  *out = stats->impl.histogram[index];
  return ANNREL_OK;
}

annrel_status annrel_stats_write_csv(const annrel_stats* stats, const char* path) {
  if (!stats || !path) return fail_invalid("null argument");
  return wrap([&] {
    write_csv_artifact(path, [&](std::ostream& out) { write_stats_csv(stats->impl, out); });
  });
}

annrel_status annrel_histogram_write_json(const annrel_stats* stats, const char* path) {
  if (!stats || !path) return fail_invalid("null argument");
  return wrap([&] {
    annrel::write_text_file(path, annrel::json_text(annrel::histogram_json(stats->impl)));
  });
}

annrel_status annrel_histogram_series_write_json(const annrel_stats* const* series,
                                                 size_t count, const char* path) {
  if (!series || !path || count == 0) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<annrel::LabelStatistics> all;
    all.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!series[i]) throw annrel::InvalidArgument("null statistics handle");
      all.push_back(series[i]->impl);
    }
    annrel::write_text_file(path, annrel::json_text(annrel::histogram_series_json(all)));
  });
}

annrel_status annrel_method_table_write_csv(const annrel_stats* const* series, size_t count,
                                            const char* path) {
  if (!series || !path || count == 0) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<annrel::LabelStatistics> all;
    all.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!series[i]) throw annrel::InvalidArgument("null statistics handle");
      all.push_back(series[i]->impl);
    }
    write_csv_artifact(path,
                       [&](std::ostream& out) { annrel::write_method_table_csv(all, out); });
  });
}

void annrel_stats_free(annrel_stats* stats) { delete stats; }

/* ---- competence tables ---- */

annrel_status annrel_competence_read(const char* path, annrel_competence** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_competence{annrel::read_competence_csv_file(path)}; });
}

annrel_status annrel_competence_create(const char* const* ids, const double* theta,
                                       size_t count, annrel_competence** out) {
  if (!out || (count > 0 && (!ids || !theta))) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!ids[i]) throw annrel::InvalidArgument("null annotator id");
      rows.emplace_back(ids[i], theta[i]);
    }
    *out = new annrel_competence{std::move(rows)};
  });
}

size_t annrel_competence_count(const annrel_competence* competence) {
  return competence ? competence->impl.size() : 0;
}

const char* annrel_competence_id(const annrel_competence* competence, size_t index) {
  if (!competence || index >= competence->impl.size()) return nullptr;
  return competence->impl[index].first.c_str();
}

annrel_status annrel_competence_theta(const annrel_competence* competence, size_t index,
                                      double* out) {
  if (!competence || !out) return fail_invalid("null argument");
  if (index >= competence->impl.size()) return fail_invalid("index out of range");
  *out = competence->impl[index].second;
  return ANNREL_OK;
}

annrel_status annrel_competence_write_csv(const annrel_competence* competence,
                                          const char* path) {
  if (!competence || !path) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::string> ids;
    std::vector<double> theta;
    ids.reserve(competence->impl.size());
    theta.reserve(competence->impl.size());
    for (const auto& [id, value] : competence->impl) {
      ids.push_back(id);
      theta.push_back(value);
    }
    write_csv_artifact(
        path, [&](std::ostream& out) { annrel::write_competence_csv(ids, theta, out); });
  });
}

void annrel_competence_free(annrel_competence* competence) { delete competence; }

/* ---- truth ---- */

annrel_status annrel_truth_read(const char* path, annrel_truth** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_truth{annrel::TruthTable::from_file(path)}; });
}

size_t annrel_truth_size(const annrel_truth* truth) { return truth ? truth->impl.size() : 0; }

annrel_status annrel_truth_value(const annrel_truth* truth, const char* file_id,
                                 const char* label, int* out) {
  if (!truth || !file_id || !label || !out) return fail_invalid("null argument");
  const auto value = truth->impl.value(file_id, label);
  *out = value.has_value() ? int(*value) : -1;
  return ANNREL_OK;
}

annrel_status annrel_recovery_write_csv(const annrel_estimate* const* estimates, size_t count,
                                        const annrel_truth* truth, const char* path) {
  if (!estimates || !truth || !path || count == 0) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<annrel::RecoveryRow> rows;
    rows.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!estimates[i]) throw annrel::InvalidArgument("null estimate handle");
      rows.push_back(annrel::recovery_against_truth(estimates[i]->impl, truth->impl));
    }
    write_csv_artifact(path, [&](std::ostream& out) { annrel::write_recovery_csv(rows, out); });
  });
}

void annrel_truth_free(annrel_truth* truth) { delete truth; }

/* ---- simulation ---- */

annrel_status annrel_spec_read(const char* path, annrel_spec** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new annrel_spec{annrel::campaign_spec_from_file(path)}; });
}

annrel_status annrel_spammers_spec(uint64_t seed, uint64_t num_annotators,
                                   uint64_t files_per_annotator, uint64_t num_files,
                                   uint64_t num_labels, annrel_spec** out) {
  if (!out) return fail_invalid("null argument");
  return wrap([&] {
    *out = new annrel_spec{annrel::spammers_spec(seed, size_t(num_annotators),
                                                 size_t(files_per_annotator),
                                                 size_t(num_files), size_t(num_labels))};
  });
}

annrel_status annrel_spec_set_seed(annrel_spec* spec, uint64_t seed) {
  if (!spec) return fail_invalid("null argument");
  spec->impl.seed = seed;
  return ANNREL_OK;
}

annrel_status annrel_spec_write_json(const annrel_spec* spec, const char* path) {
  if (!spec || !path) return fail_invalid("null argument");
  return wrap([&] {
    annrel::write_text_file(path, annrel::json_text(annrel::campaign_spec_json(spec->impl)));
  });
}

void annrel_spec_free(annrel_spec* spec) { delete spec; }

annrel_status annrel_generate_campaign(const annrel_spec* spec, annrel_campaign** out) {
  if (!spec || !out) return fail_invalid("null argument");
  return wrap([&] {
    auto campaign =
        std::make_shared<annrel::SyntheticCampaign>(annrel::generate_campaign(spec->impl));
    std::vector<double> fractions = annrel::realized_spam_fraction(*campaign);
    *out = new annrel_campaign{std::move(campaign), std::move(fractions)};
  });
}

annrel_status annrel_campaign_matrix(const annrel_campaign* campaign, annrel_matrix** out) {
  if (!campaign || !out) return fail_invalid("null argument");
  *out = new annrel_matrix{std::shared_ptr<const annrel::AnnotationMatrix>(
      campaign->impl, &campaign->impl->matrix)};
  return ANNREL_OK;
}

size_t annrel_campaign_num_records(const annrel_campaign* campaign) {
  return campaign ? campaign->impl->records.size() : 0;
}

size_t annrel_campaign_record_size(const annrel_campaign* campaign, size_t record) {
  if (!campaign || record >= campaign->impl->records.size()) return size_t(-1);
  return campaign->impl->records[record].selected.size();
}

annrel_status annrel_campaign_truth(const annrel_campaign* campaign, size_t item, int* out) {
  if (!campaign || !out) return fail_invalid("null argument");
  if (item >= campaign->impl->truth.size()) return fail_invalid("item index out of range");
  *out = campaign->impl->truth[item];
  return ANNREL_OK;
}

annrel_status annrel_campaign_spam_fraction(const annrel_campaign* campaign, size_t annotator,
                                            double* out) {
  if (!campaign || !out) return fail_invalid("null argument");
  if (annotator >= campaign->spam_fraction.size()) {
    return fail_invalid("annotator index out of range");
  }
  *out = campaign->spam_fraction[annotator];
  return ANNREL_OK;
}

annrel_status annrel_campaign_write_truth_csv(const annrel_campaign* campaign,
                                              const char* path) {
  if (!campaign || !path) return fail_invalid("null argument");
  return wrap([&] {
    write_csv_artifact(path, [&](std::ostream& out) {
      annrel::write_truth_csv(campaign->impl->matrix.items(), campaign->impl->truth, out);
    });
  });
}

void annrel_campaign_free(annrel_campaign* campaign) { delete campaign; }

}  // extern "C"
