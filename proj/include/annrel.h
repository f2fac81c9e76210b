/* annrel: annotation reliability toolkit.
 *
 * C interface to the shared library. All functions that can fail return an
 * annrel_status; ANNREL_OK means success and anything else leaves a
 * description in annrel_last_error() (thread-local). Objects returned through
 * annrel_*** out parameters are owned by the caller and released with the
 * matching *_free function. Count queries return 0 and string getters return
 * NULL on null handles or bad indices.
 */

#ifndef ANNREL_H
#define ANNREL_H

#include <stddef.h>
#include <stdint.h>

#ifndef ANNREL_API
#if defined(_WIN32)
#define ANNREL_API __declspec(dllexport)
#elif defined(__GNUC__)
#define ANNREL_API __attribute__((visibility("default")))
#else
#define ANNREL_API
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum annrel_status {
  ANNREL_OK = 0,
  ANNREL_ERR_IO = 1,
  ANNREL_ERR_PARSE = 2,
  ANNREL_ERR_INVALID_ARGUMENT = 3,
  ANNREL_ERR_NUMERIC = 4,
  ANNREL_ERR_INTERNAL = 5
} annrel_status;

typedef struct annrel_vocab annrel_vocab;
typedef struct annrel_matrix annrel_matrix;
typedef struct annrel_reports annrel_reports;
typedef struct annrel_sweep annrel_sweep;
typedef struct annrel_model annrel_model;
typedef struct annrel_estimate annrel_estimate;
typedef struct annrel_stats annrel_stats;
typedef struct annrel_competence annrel_competence;
typedef struct annrel_truth annrel_truth;
typedef struct annrel_spec annrel_spec;
typedef struct annrel_campaign annrel_campaign;

ANNREL_API const char* annrel_version(void);
ANNREL_API const char* annrel_last_error(void);

/* ---- label vocabulary ---- */

ANNREL_API annrel_status annrel_vocab_read(const char* path, annrel_vocab** out);
ANNREL_API annrel_status annrel_vocab_create(const char* const* names, size_t count,
                                             annrel_vocab** out);
ANNREL_API size_t annrel_vocab_size(const annrel_vocab* vocab);
ANNREL_API const char* annrel_vocab_label(const annrel_vocab* vocab, size_t index);
ANNREL_API void annrel_vocab_free(annrel_vocab* vocab);

/* ---- annotation matrix ---- */

/* Parse a campaign CSV (file_id,annotator_id,labels) and expand it to the
 * full (file x label) item grid. */
ANNREL_API annrel_status annrel_matrix_from_campaign(const char* path,
                                                     const annrel_vocab* vocab,
                                                     annrel_matrix** out);
/* Read the long item CSV (file_id,label,annotator_id,value). vocab may be
 * NULL, in which case labels are taken in order of first appearance. */
ANNREL_API annrel_status annrel_matrix_read(const char* path, const annrel_vocab* vocab,
                                            annrel_matrix** out);
ANNREL_API annrel_status annrel_matrix_write(const annrel_matrix* matrix, const char* path);

ANNREL_API size_t annrel_matrix_num_items(const annrel_matrix* matrix);
ANNREL_API size_t annrel_matrix_num_annotators(const annrel_matrix* matrix);
ANNREL_API size_t annrel_matrix_num_files(const annrel_matrix* matrix);
ANNREL_API size_t annrel_matrix_num_cells(const annrel_matrix* matrix);
ANNREL_API const char* annrel_matrix_item_file(const annrel_matrix* matrix, size_t item);
ANNREL_API const char* annrel_matrix_item_label(const annrel_matrix* matrix, size_t item);
ANNREL_API const char* annrel_matrix_annotator(const annrel_matrix* matrix, size_t index);
/* -1 missing, 0 or 1 stored; -2 on invalid arguments. */
ANNREL_API int annrel_matrix_cell(const annrel_matrix* matrix, size_t item, size_t annotator);
/* Number of stored responses in one item row; (size_t)-1 on bad arguments. */
ANNREL_API size_t annrel_matrix_row_size(const annrel_matrix* matrix, size_t item);

ANNREL_API annrel_status annrel_matrix_filter(const annrel_matrix* matrix,
                                              const char* const* keep, size_t count,
                                              annrel_matrix** out);
ANNREL_API annrel_status annrel_matrix_subset(const annrel_matrix* matrix, const char* label,
                                              annrel_matrix** out);
ANNREL_API void annrel_matrix_free(annrel_matrix* matrix);

/* ---- agreement ---- */

typedef enum annrel_alpha_reason {
  ANNREL_ALPHA_DEFINED = 0,
  ANNREL_ALPHA_INSUFFICIENT_DATA = 1,
  ANNREL_ALPHA_SINGLE_CATEGORY = 2
} annrel_alpha_reason;

typedef struct annrel_alpha_report {
  int defined;    /* 1 when alpha/d_o/d_e hold values; undefined fields are NaN */
  int reason;     /* annrel_alpha_reason */
  double alpha;
  double d_o;
  double d_e;
  double o[2][2]; /* coincidence counts */
  double marginal[2];
  double n;
  uint64_t units_used;
  uint64_t excluded_units;
} annrel_alpha_report;

ANNREL_API annrel_status annrel_alpha_overall(const annrel_matrix* matrix,
                                              annrel_alpha_report* out);
/* Independent closed-form route; *defined is 0 when alpha does not exist. */
ANNREL_API annrel_status annrel_alpha_closed_form(const annrel_matrix* matrix, int* defined,
                                                  double* alpha);
/* by_class = 0: a single overall report. by_class = 1: one report per
 * vocabulary label followed by the overall report. */
ANNREL_API annrel_status annrel_alpha_reports(const annrel_matrix* matrix, int by_class,
                                              annrel_reports** out);
ANNREL_API size_t annrel_reports_count(const annrel_reports* reports);
ANNREL_API const char* annrel_reports_scope(const annrel_reports* reports, size_t index);
ANNREL_API annrel_status annrel_reports_get(const annrel_reports* reports, size_t index,
                                            annrel_alpha_report* out);
ANNREL_API annrel_status annrel_reports_write_json(const annrel_reports* reports,
                                                   const char* path);
ANNREL_API annrel_status annrel_reports_write_csv(const annrel_reports* reports,
                                                  const char* path);
ANNREL_API void annrel_reports_free(annrel_reports* reports);

ANNREL_API annrel_status annrel_alpha_sweep(const annrel_matrix* matrix,
                                            const annrel_competence* competence,
                                            const double* thresholds, size_t count,
                                            annrel_sweep** out);
ANNREL_API size_t annrel_sweep_count(const annrel_sweep* sweep);
ANNREL_API annrel_status annrel_sweep_get(const annrel_sweep* sweep, size_t index,
                                          double* threshold, size_t* annotators_kept,
                                          annrel_alpha_report* report);
ANNREL_API annrel_status annrel_sweep_write_json(const annrel_sweep* sweep, const char* path);
ANNREL_API annrel_status annrel_sweep_write_csv(const annrel_sweep* sweep, const char* path);
ANNREL_API void annrel_sweep_free(annrel_sweep* sweep);

/* Class rows x threshold columns of alpha values, one reports handle per
 * column, all covering the same class list. */
ANNREL_API annrel_status annrel_class_table_write_csv(const annrel_reports* const* columns,
                                                      const char* const* column_names,
                                                      size_t count, const char* path);

/* ---- annotator competence model ---- */

typedef struct annrel_mace_config {
  uint64_t restarts;
  uint64_t max_iterations;
  double tolerance;
  double smoothing_delta;
  uint64_t seed;
} annrel_mace_config;

/* Fill with the defaults (10 restarts, 50 iterations, 1e-6 tolerance, 0.1
 * smoothing, seed 0). */
ANNREL_API void annrel_mace_config_init(annrel_mace_config* config);

ANNREL_API annrel_status annrel_mace_fit(const annrel_matrix* matrix,
                                         const annrel_mace_config* config,
                                         annrel_model** out);
/* Data log-likelihood of arbitrary parameters; xi is 2*num_annotators values,
 * annotator-major. */
ANNREL_API annrel_status annrel_log_likelihood(const annrel_matrix* matrix,
                                               const double* theta, const double* xi,
                                               size_t num_annotators, double* out);

ANNREL_API size_t annrel_model_num_annotators(const annrel_model* model);
ANNREL_API size_t annrel_model_num_items(const annrel_model* model);
ANNREL_API const char* annrel_model_annotator_id(const annrel_model* model, size_t index);
ANNREL_API annrel_status annrel_model_theta(const annrel_model* model, size_t index,
                                            double* out);
ANNREL_API annrel_status annrel_model_xi(const annrel_model* model, size_t index,
                                         double out[2]);
ANNREL_API annrel_status annrel_model_posterior(const annrel_model* model, size_t item,
                                                double* out);
ANNREL_API size_t annrel_model_row_size(const annrel_model* model, size_t item);
/* Posterior spam probability of the slot-th stored response of an item row
 * (same order as annrel_matrix rows). */
ANNREL_API annrel_status annrel_model_expected_spam(const annrel_model* model, size_t item,
                                                    size_t slot, double* out);
ANNREL_API double annrel_model_log_likelihood(const annrel_model* model);
ANNREL_API size_t annrel_model_iterations(const annrel_model* model);
ANNREL_API size_t annrel_model_best_restart(const annrel_model* model);
ANNREL_API size_t annrel_model_restart_count(const annrel_model* model);
ANNREL_API size_t annrel_model_trace_length(const annrel_model* model, size_t restart);
/* Per-iteration data log-likelihood and smoothed objective of one restart. */
ANNREL_API annrel_status annrel_model_trace(const annrel_model* model, size_t restart,
                                            size_t iteration, double* log_likelihood,
                                            double* objective);
ANNREL_API annrel_status annrel_model_restart_ll(const annrel_model* model, size_t restart,
                                                 double* out);
ANNREL_API annrel_status annrel_mace_predict(const annrel_model* model, annrel_estimate** out);
ANNREL_API annrel_status annrel_model_competence(const annrel_model* model,
                                                 annrel_competence** out);
/* model.json; the estimate supplies decisions/confidence/kept per item. */
ANNREL_API annrel_status annrel_model_write_json(const annrel_model* model,
                                                 const annrel_estimate* estimate,
                                                 const char* path);
ANNREL_API void annrel_model_free(annrel_model* model);

/* ---- ground-truth estimates ---- */

ANNREL_API annrel_status annrel_union_vote(const annrel_matrix* matrix, annrel_estimate** out);
ANNREL_API annrel_status annrel_majority_vote(const annrel_matrix* matrix,
                                              annrel_estimate** out);
/* Keep the top keep_percent% of items by confidence. */
ANNREL_API annrel_status annrel_estimate_threshold(const annrel_estimate* estimate,
                                                   double keep_percent, annrel_estimate** out);
ANNREL_API size_t annrel_estimate_size(const annrel_estimate* estimate);
ANNREL_API const char* annrel_estimate_method(const annrel_estimate* estimate);
ANNREL_API const char* annrel_estimate_file(const annrel_estimate* estimate, size_t item);
ANNREL_API const char* annrel_estimate_label(const annrel_estimate* estimate, size_t item);
ANNREL_API annrel_status annrel_estimate_get(const annrel_estimate* estimate, size_t item,
                                             int* decision, double* confidence, int* kept);
/* labels.csv: file_id,label,decision,confidence,kept */
ANNREL_API annrel_status annrel_estimate_write_csv(const annrel_estimate* estimate,
                                                   const char* path);
ANNREL_API void annrel_estimate_free(annrel_estimate* estimate);

/* ---- label statistics ---- */

ANNREL_API annrel_status annrel_label_statistics(const annrel_estimate* estimate,
                                                 annrel_stats** out);
ANNREL_API size_t annrel_stats_num_labels(const annrel_stats* stats);
ANNREL_API const char* annrel_stats_label(const annrel_stats* stats, size_t index);
ANNREL_API annrel_status annrel_stats_count(const annrel_stats* stats, size_t index,
                                            uint64_t* out);
ANNREL_API double annrel_stats_mean_labels_per_file(const annrel_stats* stats);
ANNREL_API size_t annrel_stats_histogram_size(const annrel_stats* stats);
ANNREL_API annrel_status annrel_stats_histogram(const annrel_stats* stats, size_t index,
                                                uint64_t* out);
ANNREL_API annrel_status annrel_stats_write_csv(const annrel_stats* stats, const char* path);
ANNREL_API annrel_status annrel_histogram_write_json(const annrel_stats* stats,
                                                     const char* path);
ANNREL_API annrel_status annrel_histogram_series_write_json(const annrel_stats* const* series,
                                                            size_t count, const char* path);
ANNREL_API annrel_status annrel_method_table_write_csv(const annrel_stats* const* series,
                                                       size_t count, const char* path);
ANNREL_API void annrel_stats_free(annrel_stats* stats);

/* ---- competence tables ---- */

ANNREL_API annrel_status annrel_competence_read(const char* path, annrel_competence** out);
ANNREL_API annrel_status annrel_competence_create(const char* const* ids, const double* theta,
                                                  size_t count, annrel_competence** out);
ANNREL_API size_t annrel_competence_count(const annrel_competence* competence);
ANNREL_API const char* annrel_competence_id(const annrel_competence* competence, size_t index);
ANNREL_API annrel_status annrel_competence_theta(const annrel_competence* competence,
                                                 size_t index, double* out);
ANNREL_API annrel_status annrel_competence_write_csv(const annrel_competence* competence,
                                                     const char* path);
ANNREL_API void annrel_competence_free(annrel_competence* competence);

/* ---- planted truth ---- */

ANNREL_API annrel_status annrel_truth_read(const char* path, annrel_truth** out);
ANNREL_API size_t annrel_truth_size(const annrel_truth* truth);
/* *out is 0 or 1, or -1 when the pair is absent. */
ANNREL_API annrel_status annrel_truth_value(const annrel_truth* truth, const char* file_id,
                                            const char* label, int* out);
ANNREL_API annrel_status annrel_recovery_write_csv(const annrel_estimate* const* estimates,
                                                   size_t count, const annrel_truth* truth,
                                                   const char* path);
ANNREL_API void annrel_truth_free(annrel_truth* truth);

/* ---- simulation ---- */

ANNREL_API annrel_status annrel_spec_read(const char* path, annrel_spec** out);
ANNREL_API annrel_status annrel_spammers_spec(uint64_t seed, uint64_t num_annotators,
                                              uint64_t files_per_annotator,
                                              uint64_t num_files, uint64_t num_labels,
                                              annrel_spec** out);
ANNREL_API annrel_status annrel_spec_set_seed(annrel_spec* spec, uint64_t seed);
ANNREL_API annrel_status annrel_spec_write_json(const annrel_spec* spec, const char* path);
ANNREL_API void annrel_spec_free(annrel_spec* spec);

ANNREL_API annrel_status annrel_generate_campaign(const annrel_spec* spec,
                                                  annrel_campaign** out);
/* New handle sharing ownership of the campaign's matrix. */
ANNREL_API annrel_status annrel_campaign_matrix(const annrel_campaign* campaign,
                                                annrel_matrix** out);
ANNREL_API size_t annrel_campaign_num_records(const annrel_campaign* campaign);
/* Number of labels the annotator selected in one submitted record. */
ANNREL_API size_t annrel_campaign_record_size(const annrel_campaign* campaign, size_t record);
ANNREL_API annrel_status annrel_campaign_truth(const annrel_campaign* campaign, size_t item,
                                               int* out);
/* Fraction of one annotator column's responses that came from the spam
 * branch. */
ANNREL_API annrel_status annrel_campaign_spam_fraction(const annrel_campaign* campaign,
                                                       size_t annotator, double* out);
ANNREL_API annrel_status annrel_campaign_write_truth_csv(const annrel_campaign* campaign,
                                                         const char* path);
ANNREL_API void annrel_campaign_free(annrel_campaign* campaign);

#ifdef __cplusplus
}
#endif

#endif /* ANNREL_H */
