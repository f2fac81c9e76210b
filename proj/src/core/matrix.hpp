#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/text.hpp"
#include "core/vocab.hpp"

namespace annrel {

/// One annotated unit: a (file, label) pair carrying a yes/no value.
struct ItemId {
  std::string file_id;
  std::string label;

  friend bool operator==(const ItemId&, const ItemId&) = default;
};

/// One submitted annotation pass: the subset of the vocabulary an annotator
/// selected for one file. An empty selection is legal and means "none of the
/// candidate labels are present" (all-implicit-negative).
struct CampaignRecord {
  std::string file_id;
  std::string annotator_id;
  std::vector<std::string> selected;
};

/// Sparse items x annotators table of binary responses. A stored cell is 0 or
/// 1; a missing cell means the annotator never saw the item's file. Immutable
/// after construction; all transformations return new matrices.
class AnnotationMatrix {
 public:
  struct Response {
    std::uint32_t annotator;  // column index
    std::uint8_t value;       // 0 or 1
  };

  struct Entry {
    std::size_t item;
    std::size_t annotator;
    std::uint8_t value;
  };

  AnnotationMatrix() = default;

  /// Validates label membership, uniqueness of items/annotators, cell values
  /// and duplicate cells; throws InvalidArgument on any violation.
  AnnotationMatrix(LabelVocabulary vocab, std::vector<ItemId> items,
                   std::vector<std::string> annotators, const std::vector<Entry>& cells);

  /// Binarize campaign records: one item per (file, label) over the full
  /// file x vocabulary grid. A selected label becomes an explicit 1, an
  /// unselected label on an annotated file an explicit 0, and files an
  /// annotator never saw stay missing. Items are ordered by (file_id,
  /// vocabulary index), annotators lexicographically.
  static AnnotationMatrix expand_to_items(const std::vector<CampaignRecord>& records,
                                          const LabelVocabulary& vocab);

  std::size_t num_items() const { return items_.size(); }
  std::size_t num_annotators() const { return annotators_.size(); }
  std::size_t num_cells() const { return cell_count_; }
  std::size_t num_files() const { return files_.size(); }

  const ItemId& item(std::size_t index) const { return items_.at(index); }
  std::uint32_t item_label_index(std::size_t index) const { return item_label_.at(index); }
  const std::vector<ItemId>& items() const { return items_; }
  const std::string& annotator(std::size_t index) const { return annotators_.at(index); }
  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::vector<std::string>& files() const { return files_; }
  const LabelVocabulary& vocab() const { return vocab_; }

  /// Responses stored for one item, ordered by annotator column.
  std::span<const Response> responses(std::size_t item) const {
    return rows_.at(item);
  }
  /// Number of responses m_u for one item.
  std::size_t responses_for(std::size_t item) const { return rows_.at(item).size(); }

  /// -1 when missing, else 0/1.
  int cell(std::size_t item, std::size_t annotator) const;

  std::optional<std::size_t> find_item(std::string_view file_id, std::string_view label) const;
  std::optional<std::size_t> annotator_index(std::string_view id) const;

  /// Stored responses per annotator column.
  std::vector<std::size_t> responses_per_annotator() const;

  /// Drop every column not in `keep` (set semantics; order of the surviving
  /// columns is preserved). Rows are kept even when they lose all responses.
  /// Throws InvalidArgument if `keep` names an unknown annotator.
  AnnotationMatrix filter_annotators(const std::vector<std::string>& keep) const;

  /// Keep only rows whose label equals `label` (must be in the vocabulary).
  AnnotationMatrix subset_by_label(std::string_view label) const;

 private:
  static std::string item_key(std::string_view file_id, std::string_view label);

  LabelVocabulary vocab_;
  std::vector<ItemId> items_;
  std::vector<std::uint32_t> item_label_;
  std::vector<std::string> annotators_;
  std::vector<std::vector<Response>> rows_;
  std::vector<std::string> files_;  // distinct file ids, first-appearance order
  StringIndexMap item_index_;
  StringIndexMap annotator_index_;
  std::size_t cell_count_ = 0;
};

}  // namespace annrel
