#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/matrix.hpp"
#include "core/vocab.hpp"

namespace annrel {

/// Candidate ground truth: one binary decision per item with a confidence in
/// [0.5, 1] for posterior-backed methods (union confidence is the positive
/// fraction and may be lower). `kept` marks the retained subset after
/// confidence thresholding; it is all-true for plain methods.
struct GroundTruthEstimate {
  std::vector<ItemId> items;
  LabelVocabulary vocab;
  std::vector<std::uint8_t> decisions;
  std::vector<double> confidence;
  std::vector<std::uint8_t> kept;
  std::string method;

  std::size_t size() const { return items.size(); }
};

}  // namespace annrel
