#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/estimate.hpp"
#include "core/matrix.hpp"

namespace annrel {

/// Positive-label counts per label and per file for one aggregation method,
/// counting only items that are both decided 1 and kept.
struct LabelStatistics {
  std::string method;
  std::vector<std::string> labels;  // vocabulary order
  std::vector<std::size_t> per_label_counts;
  std::vector<std::string> files;   // file order of the estimate's items
  std::vector<std::size_t> labels_per_file;
  std::vector<std::size_t> histogram;  // index = labels per file, 0..|vocab|
  double mean_labels_per_file = 0.0;
};

/// Decision 1 iff any response in the row is 1; confidence is the positive
/// fraction among responses (0.0 and decision 0 for empty rows).
GroundTruthEstimate union_vote(const AnnotationMatrix& matrix);

/// Decision 1 iff strictly more than half of the responses are 1; ties and
/// empty rows resolve to 0. Confidence is max(p, 1-p) over the positive
/// fraction p, 0.5 for empty rows.
GroundTruthEstimate majority_vote(const AnnotationMatrix& matrix);

/// Requires the estimate to cover a complete file x vocabulary grid; throws
/// InvalidArgument otherwise.
LabelStatistics label_statistics(const GroundTruthEstimate& estimate);

}  // namespace annrel
