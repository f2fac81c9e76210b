#include "core/matrix.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "core/error.hpp"

namespace annrel {

std::string AnnotationMatrix::item_key(std::string_view file_id, std::string_view label) {
  std::string key;
  key.reserve(file_id.size() + 1 + label.size());
  key.append(file_id);
  key.push_back('\x1f');
  key.append(label);
  return key;
}

AnnotationMatrix::AnnotationMatrix(LabelVocabulary vocab, std::vector<ItemId> items,
                                   std::vector<std::string> annotators,
                                   const std::vector<Entry>& cells)
    : vocab_(std::move(vocab)),
      items_(std::move(items)),
      annotators_(std::move(annotators)) {
  item_label_.reserve(items_.size());
  item_index_.reserve(items_.size());
  StringIndexMap file_index;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const ItemId& it = items_[i];
    const auto label_idx = vocab_.index_of(it.label);
    if (!label_idx) {
      throw InvalidArgument("item label '" + it.label + "' is not in the vocabulary");
    }
    if (it.file_id.empty()) throw InvalidArgument("item with empty file id");
    item_label_.push_back(static_cast<std::uint32_t>(*label_idx));
    if (!item_index_.emplace(item_key(it.file_id, it.label), i).second) {
      throw InvalidArgument("duplicate item (" + it.file_id + ", " + it.label + ")");
    }
    if (file_index.emplace(it.file_id, files_.size()).second) {
      files_.push_back(it.file_id);
    }
  }

  annotator_index_.reserve(annotators_.size());
  for (std::size_t j = 0; j < annotators_.size(); ++j) {
    if (annotators_[j].empty()) throw InvalidArgument("empty annotator id");
    if (!annotator_index_.emplace(annotators_[j], j).second) {
      throw InvalidArgument("duplicate annotator id '" + annotators_[j] + "'");
    }
  }

  rows_.assign(items_.size(), {});
  for (const Entry& e : cells) {
    if (e.item >= items_.size()) throw InvalidArgument("cell item index out of range");
    if (e.annotator >= annotators_.size()) {
      throw InvalidArgument("cell annotator index out of range");
    }
    if (e.value > 1) throw InvalidArgument("cell value must be 0 or 1");
    rows_[e.item].push_back(
        {static_cast<std::uint32_t>(e.annotator), e.value});
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& row = rows_[i];
    std::sort(row.begin(), row.end(),
              [](const Response& a, const Response& b) { return a.annotator < b.annotator; });
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k].annotator == row[k - 1].annotator) {
        throw InvalidArgument("duplicate cell for item (" + items_[i].file_id + ", " +
                              items_[i].label + "), annotator '" +
                              annotators_[row[k].annotator] + "'");
      }
    }
    cell_count_ += row.size();
  }
}

AnnotationMatrix AnnotationMatrix::expand_to_items(
    const std::vector<CampaignRecord>& records, const LabelVocabulary& vocab) {
  std::set<std::string> file_set;
  std::set<std::string> annotator_set;
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const CampaignRecord& r : records) {
    if (r.file_id.empty()) throw InvalidArgument("campaign record with empty file id");
    if (r.annotator_id.empty()) {
      throw InvalidArgument("campaign record with empty annotator id");
    }
    for (const std::string& l : r.selected) {
      if (!vocab.contains(l)) {
        throw InvalidArgument("selected label '" + l + "' is not in the vocabulary");
      }
    }
    if (!seen.emplace(r.file_id, r.annotator_id).second) {
      throw InvalidArgument("duplicate record for (" + r.file_id + ", " +
                            r.annotator_id + ")");
    }
    file_set.insert(r.file_id);
    annotator_set.insert(r.annotator_id);
  }

  const std::vector<std::string> files(file_set.begin(), file_set.end());
  std::vector<std::string> annotators(annotator_set.begin(), annotator_set.end());

  StringIndexMap file_pos;
  for (std::size_t f = 0; f < files.size(); ++f) file_pos.emplace(files[f], f);
  StringIndexMap annotator_pos;
  for (std::size_t j = 0; j < annotators.size(); ++j) annotator_pos.emplace(annotators[j], j);

  const std::size_t num_labels = vocab.size();
  std::vector<ItemId> items;
  items.reserve(files.size() * num_labels);
  for (const std::string& f : files) {
    for (std::size_t l = 0; l < num_labels; ++l) {
      items.push_back({f, vocab.label(l)});
    }
  }

  std::vector<Entry> cells;
  cells.reserve(records.size() * num_labels);
  std::vector<std::uint8_t> mask(num_labels);
  for (const CampaignRecord& r : records) {
    std::fill(mask.begin(), mask.end(), 0);
    for (const std::string& l : r.selected) mask[*vocab.index_of(l)] = 1;
    const std::size_t base = file_pos.find(r.file_id)->second * num_labels;
    const std::size_t j = annotator_pos.find(r.annotator_id)->second;
    for (std::size_t l = 0; l < num_labels; ++l) {
      cells.push_back({base + l, j, mask[l]});
    }
  }

  return AnnotationMatrix(vocab, std::move(items), std::move(annotators), cells);
}

int AnnotationMatrix::cell(std::size_t item, std::size_t annotator) const {
  for (const Response& r : rows_.at(item)) {
    if (r.annotator == annotator) return r.value;
  }
  return -1;
}

std::optional<std::size_t> AnnotationMatrix::find_item(std::string_view file_id,
                                                       std::string_view label) const {
  const auto it = item_index_.find(item_key(file_id, label));
  if (it == item_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AnnotationMatrix::annotator_index(std::string_view id) const {
  const auto it = annotator_index_.find(id);
  if (it == annotator_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> AnnotationMatrix::responses_per_annotator() const {
  std::vector<std::size_t> counts(annotators_.size(), 0);
  for (const auto& row : rows_) {
    for (const Response& r : row) ++counts[r.annotator];
  }
  return counts;
}

AnnotationMatrix AnnotationMatrix::filter_annotators(
    const std::vector<std::string>& keep) const {
  std::vector<bool> keep_col(annotators_.size(), false);
  for (const std::string& id : keep) {
    const auto j = annotator_index(id);
    if (!j) throw InvalidArgument("unknown annotator id '" + id + "'");
    keep_col[*j] = true;
  }

  std::vector<std::string> new_annotators;
  std::vector<std::size_t> remap(annotators_.size(), 0);
  for (std::size_t j = 0; j < annotators_.size(); ++j) {
    if (keep_col[j]) {
      remap[j] = new_annotators.size();
      new_annotators.push_back(annotators_[j]);
    }
  }

  std::vector<Entry> cells;
  cells.reserve(cell_count_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const Response& r : rows_[i]) {
      if (keep_col[r.annotator]) cells.push_back({i, remap[r.annotator], r.value});
    }
  }
  return AnnotationMatrix(vocab_, items_, std::move(new_annotators), cells);
}

AnnotationMatrix AnnotationMatrix::subset_by_label(std::string_view label) const {
  const auto label_idx = vocab_.index_of(label);
  if (!label_idx) {
    throw InvalidArgument("unknown label '" + std::string(label) + "'");
  }

  std::vector<ItemId> new_items;
  std::vector<std::size_t> remap(items_.size(), 0);
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (item_label_[i] == *label_idx) {
      remap[i] = new_items.size();
      new_items.push_back(items_[i]);
    }
  }

  std::vector<Entry> cells;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (item_label_[i] != *label_idx) continue;
    for (const Response& r : rows_[i]) cells.push_back({remap[i], r.annotator, r.value});
  }
  return AnnotationMatrix(vocab_, std::move(new_items), annotators_, cells);
}

}  // namespace annrel
