#include "core/agreement.hpp"

#include <unordered_map>

#include "core/error.hpp"

namespace annrel {

const char* alpha_reason_name(AlphaUndefinedReason reason) {
  switch (reason) {
    case AlphaUndefinedReason::none: return "none";
    case AlphaUndefinedReason::insufficient_data: return "insufficient_data";
    case AlphaUndefinedReason::single_category: return "single_category";
  }
  return "none";
}

CoincidenceMatrix coincidences(const AnnotationMatrix& matrix) {
  CoincidenceMatrix counts;
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto row = matrix.responses(i);
    const std::size_t m = row.size();
    if (m < 2) {
      ++counts.excluded_units;
      continue;
    }
    ++counts.units_used;
    std::size_t ones = 0;
    for (const auto& resp : row) ones += resp.value;
    const double c1 = double(ones);
    const double c0 = double(m - ones);
    const double pairs = double(m - 1);
    counts.o[0][0] += c0 * (c0 - 1.0) / pairs;
    counts.o[1][1] += c1 * (c1 - 1.0) / pairs;
    counts.o[0][1] += c0 * c1 / pairs;
    counts.o[1][0] += c1 * c0 / pairs;
  }
  counts.marginal[0] = counts.o[0][0] + counts.o[0][1];
  counts.marginal[1] = counts.o[1][0] + counts.o[1][1];
  counts.total = counts.marginal[0] + counts.marginal[1];
  return counts;
}

AlphaReport nominal_alpha(const CoincidenceMatrix& counts, std::string scope) {
  AlphaReport report;
  report.scope = std::move(scope);
  report.coincidence = counts;
  if (counts.total <= 1.0) {
    report.reason = AlphaUndefinedReason::insufficient_data;
    return report;
  }
  const double n = counts.total;
  report.observed_disagreement = (counts.o[0][1] + counts.o[1][0]) / n;
  const double sum_sq =
      counts.marginal[0] * counts.marginal[0] + counts.marginal[1] * counts.marginal[1];
  const double expected_mass = n * n - sum_sq;
  if (expected_mass <= 0.0) {
    report.reason = AlphaUndefinedReason::single_category;
    return report;
  }
  report.expected_disagreement = expected_mass / (n * (n - 1.0));
  report.alpha = 1.0 - *report.observed_disagreement / *report.expected_disagreement;
  return report;
}

std::optional<double> alpha_closed_form(const CoincidenceMatrix& counts) {
  if (counts.total <= 1.0) return std::nullopt;
  const double n = counts.total;
  const double sum_sq =
      counts.marginal[0] * counts.marginal[0] + counts.marginal[1] * counts.marginal[1];
  if (n * n - sum_sq <= 0.0) return std::nullopt;
  return 1.0 - (n - 1.0) * (n - counts.o[0][0] - counts.o[1][1]) / (n * n - sum_sq);
}

AlphaReport nominal_alpha(const AnnotationMatrix& matrix) {
  return nominal_alpha(coincidences(matrix), "overall");
}

std::vector<AlphaReport> alpha_by_class(const AnnotationMatrix& matrix) {
  std::vector<AlphaReport> reports;
  reports.reserve(matrix.vocab().size() + 1);
  for (const std::string& label : matrix.vocab().labels()) {
    reports.push_back(nominal_alpha(coincidences(matrix.subset_by_label(label)), label));
  }
  reports.push_back(nominal_alpha(matrix));
  return reports;
}

std::vector<ThresholdAlpha> alpha_threshold_sweep(
    const AnnotationMatrix& matrix,
    const std::vector<std::pair<std::string, double>>& competence,
    const std::vector<double>& thresholds) {
  std::unordered_map<std::string, double> theta;
  theta.reserve(competence.size());
  for (const auto& [id, value] : competence) {
    if (!theta.emplace(id, value).second) {
      throw InvalidArgument("duplicate competence entry for annotator \"" + id + "\"");
    }
  }
  for (const std::string& id : matrix.annotators()) {
    if (theta.find(id) == theta.end()) {
      throw InvalidArgument("no competence entry for annotator \"" + id + "\"");
    }
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw InvalidArgument("thresholds must be strictly ascending");
    }
  }

  std::vector<ThresholdAlpha> sweep;
  sweep.reserve(thresholds.size());
  for (const double t : thresholds) {
    std::vector<std::string> keep;
    for (const std::string& id : matrix.annotators()) {
      if (theta.find(id)->second >= t) keep.push_back(id);
    }
    ThresholdAlpha point;
    point.threshold = t;
    point.annotators_kept = keep.size();
    point.report = nominal_alpha(matrix.filter_annotators(keep));
    sweep.push_back(std::move(point));
  }
  return sweep;
}

}  // namespace annrel
