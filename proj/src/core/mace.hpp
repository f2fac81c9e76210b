#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/estimate.hpp"
#include "core/matrix.hpp"

namespace annrel {

// Latent-variable model of annotator behavior. For each response, with
// probability theta_j the annotator copies the item's hidden binary truth;
// otherwise the response is drawn from the annotator's personal distribution
// xi_j regardless of the truth. The hidden truth prior is fixed uniform.
// Fitting is EM with random restarts; the M-step adds `smoothing_delta` to
// every fractional count, which makes the maximized objective the data
// likelihood plus a weak smoothing penalty on theta and xi.

struct MaceConfig {
  std::size_t restarts = 10;
  std::size_t max_iterations = 50;
  double tolerance = 1e-6;      // relative objective improvement to stop
  double smoothing_delta = 0.1;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidArgument
};

struct RestartSummary {
  std::size_t restart = 0;
  std::size_t iterations = 0;
  double final_log_likelihood = 0.0;
  double final_objective = 0.0;
  /// Data log-likelihood after each completed iteration's M-step.
  std::vector<double> log_likelihood_trace;
  /// Smoothed objective (log-likelihood plus penalty) on the same grid.
  std::vector<double> objective_trace;
};

/// Fitted model. Vectors are indexed like the source matrix: theta/xi by
/// annotator column, posteriors by item row, expected_spam mirroring each
/// row's stored responses.
struct MaceModel {
  std::vector<std::string> annotator_ids;
  std::vector<ItemId> items;
  LabelVocabulary vocab;

  std::vector<double> theta;
  std::vector<std::array<double, 2>> xi;
  std::vector<double> posterior_positive;
  std::vector<std::vector<double>> expected_spam;

  double log_likelihood = 0.0;
  std::size_t iterations_used = 0;
  std::size_t best_restart = 0;
  std::vector<RestartSummary> restarts;
  MaceConfig config;
};

/// P(response = a | truth = t) for one annotator: theta * [a == t] +
/// (1 - theta) * xi[a].
double observation_likelihood(double theta, const std::array<double, 2>& xi, int a, int t);

/// Data log-likelihood under uniform truth prior, summed over items in log
/// space. Items with no responses contribute 0.
double log_likelihood(const AnnotationMatrix& matrix,
                      const std::vector<double>& theta,
                      const std::vector<std::array<double, 2>>& xi);

/// EM with `config.restarts` independently seeded initializations; the
/// restart with the highest final data log-likelihood wins, ties going to the
/// lowest restart index. Throws NumericError when the matrix has no cells.
MaceModel em_fit(const AnnotationMatrix& matrix, const MaceConfig& config);

/// Decision = argmax posterior with ties to 0; confidence = max posterior.
GroundTruthEstimate predict(const MaceModel& model);

/// Keep the top ceil(keep_percent/100 * N) items by confidence (ties keep the
/// earlier item); decisions and confidences are unchanged. keep_percent must
/// lie in (0, 100].
GroundTruthEstimate threshold_at(const GroundTruthEstimate& estimate, double keep_percent);

}  // namespace annrel
