#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/text.hpp"

namespace annrel {

/// Fixed, ordered list of candidate label names. The order is set at
/// construction and drives all downstream item indexing, so two vocabularies
/// with the same names in a different order are different vocabularies.
class LabelVocabulary {
 public:
  LabelVocabulary() = default;

  /// Throws InvalidArgument on empty or duplicate names.
  explicit LabelVocabulary(std::vector<std::string> labels);

  /// One label per line; blank lines ignored. Throws ParseError if the
  /// stream yields no labels at all.
  static LabelVocabulary from_stream(std::istream& in);
  static LabelVocabulary from_file(const std::string& path);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const LabelVocabulary& a, const LabelVocabulary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  StringIndexMap index_;
};

}  // namespace annrel
