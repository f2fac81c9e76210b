#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/matrix.hpp"

namespace annrel {

/// Why an alpha value is absent.
enum class AlphaUndefinedReason {
  none,               // alpha is defined
  insufficient_data,  // no unit carries two or more responses
  single_category,    // every pairable response falls in one category
};

/// Value-by-value coincidence counts over all pairable units. Each unit with
/// m >= 2 responses contributes c_v * (c_w - [v == w]) / (m - 1) to o[v][w],
/// so the total mass equals the number of pairable responses.
struct CoincidenceMatrix {
  double o[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double marginal[2] = {0.0, 0.0};
  double total = 0.0;
  std::size_t units_used = 0;
  std::size_t excluded_units = 0;
};

struct AlphaReport {
  std::string scope;  // "overall" or a label name
  std::optional<double> alpha;
  AlphaUndefinedReason reason = AlphaUndefinedReason::none;
  std::optional<double> observed_disagreement;
  std::optional<double> expected_disagreement;
  CoincidenceMatrix coincidence;
};

const char* alpha_reason_name(AlphaUndefinedReason reason);

/// Tally coincidences over every row of the matrix. Rows with fewer than two
/// responses are excluded and counted.
CoincidenceMatrix coincidences(const AnnotationMatrix& matrix);

/// Alpha via disagreements: 1 - D_o / D_e with D_o read off the off-diagonal
/// coincidence mass, so perfect agreement yields exactly 1.0. Undefined when
/// n <= 1 (insufficient data) or all mass sits in one category.
AlphaReport nominal_alpha(const CoincidenceMatrix& counts, std::string scope = "overall");

/// Alpha via the closed nominal form 1 - (n-1)(n - sum_c o_cc)/(n^2 - sum_c n_c^2).
/// Same value as the disagreement route up to rounding; kept as a separate
/// arithmetic path so the two can be checked against each other.
std::optional<double> alpha_closed_form(const CoincidenceMatrix& counts);

AlphaReport nominal_alpha(const AnnotationMatrix& matrix);

/// One report per vocabulary label (rows restricted to that label) followed by
/// the overall report.
std::vector<AlphaReport> alpha_by_class(const AnnotationMatrix& matrix);

struct ThresholdAlpha {
  double threshold = 0.0;
  std::size_t annotators_kept = 0;
  AlphaReport report;
};

/// Recompute overall alpha keeping only annotators with competence >= t, for
/// each threshold. Every annotator in the matrix must have a competence entry
/// and thresholds must be strictly ascending.
std::vector<ThresholdAlpha> alpha_threshold_sweep(
    const AnnotationMatrix& matrix,
    const std::vector<std::pair<std::string, double>>& competence,
    const std::vector<double>& thresholds);

}  // namespace annrel
