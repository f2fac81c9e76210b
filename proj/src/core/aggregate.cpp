#include "core/aggregate.hpp"

#include "core/error.hpp"
#include "core/text.hpp"

namespace annrel {
namespace {

GroundTruthEstimate vote_shell(const AnnotationMatrix& matrix, std::string method) {
  GroundTruthEstimate est;
  est.items = matrix.items();
  est.vocab = matrix.vocab();
  est.method = std::move(method);
  est.decisions.resize(matrix.num_items());
  est.confidence.resize(matrix.num_items());
  est.kept.assign(matrix.num_items(), 1);
  return est;
}

}  // namespace

GroundTruthEstimate union_vote(const AnnotationMatrix& matrix) {
  GroundTruthEstimate est = vote_shell(matrix, "union");
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto row = matrix.responses(i);
    std::size_t ones = 0;
    for (const auto& resp : row) ones += resp.value;
    est.decisions[i] = ones > 0 ? 1 : 0;
    est.confidence[i] = row.empty() ? 0.0 : double(ones) / double(row.size());
  }
  return est;
}

GroundTruthEstimate majority_vote(const AnnotationMatrix& matrix) {
  GroundTruthEstimate est = vote_shell(matrix, "majority");
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto row = matrix.responses(i);
    if (row.empty()) {
      est.decisions[i] = 0;
      est.confidence[i] = 0.5;
      continue;
    }
    std::size_t ones = 0;
    for (const auto& resp : row) ones += resp.value;
    const double p = double(ones) / double(row.size());
    est.decisions[i] = 2 * ones > row.size() ? 1 : 0;
    est.confidence[i] = p > 0.5 ? p : 1.0 - p;
  }
  return est;
}

LabelStatistics label_statistics(const GroundTruthEstimate& estimate) {
  LabelStatistics stats;
  stats.method = estimate.method;
  stats.labels = estimate.vocab.labels();
  stats.per_label_counts.assign(estimate.vocab.size(), 0);

  StringIndexMap file_index;
  for (const ItemId& item : estimate.items) {
    if (file_index.find(item.file_id) == file_index.end()) {
      file_index.emplace(item.file_id, stats.files.size());
      stats.files.push_back(item.file_id);
    }
  }
  const std::size_t vocab_size = estimate.vocab.size();
  if (estimate.items.size() != stats.files.size() * vocab_size) {
    throw InvalidArgument("item grid incomplete");
  }
  std::vector<std::uint8_t> seen(stats.files.size() * vocab_size, 0);
  for (const ItemId& item : estimate.items) {
    const auto label = estimate.vocab.index_of(item.label);
    if (!label) throw InvalidArgument("item grid incomplete");
    auto& slot = seen[file_index.find(item.file_id)->second * vocab_size + *label];
    if (slot) throw InvalidArgument("item grid incomplete");
    slot = 1;
  }

  stats.labels_per_file.assign(stats.files.size(), 0);
  for (std::size_t i = 0; i < estimate.items.size(); ++i) {
    if (!estimate.decisions[i] || !estimate.kept[i]) continue;
    ++stats.per_label_counts[*estimate.vocab.index_of(estimate.items[i].label)];
    ++stats.labels_per_file[file_index.find(estimate.items[i].file_id)->second];
  }

  stats.histogram.assign(vocab_size + 1, 0);
  std::size_t total = 0;
  for (const std::size_t count : stats.labels_per_file) {
    ++stats.histogram[count];
    total += count;
  }
  stats.mean_labels_per_file =
      stats.files.empty() ? 0.0 : double(total) / double(stats.files.size());
  return stats;
}

}  // namespace annrel
