#include "core/vocab.hpp"

#include <fstream>
#include <istream>
#include <utility>

#include "core/error.hpp"

namespace annrel {

LabelVocabulary::LabelVocabulary(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      throw InvalidArgument("vocabulary label at position " + std::to_string(i) +
                            " is empty");
    }
    if (!index_.emplace(labels_[i], i).second) {
      throw InvalidArgument("duplicate vocabulary label '" + labels_[i] + "'");
    }
  }
}

LabelVocabulary LabelVocabulary::from_stream(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view name = strip_cr(line);
    if (name.empty()) continue;
    labels.emplace_back(name);
  }
  if (labels.empty()) throw ParseError("vocabulary contains no labels");
  return LabelVocabulary(std::move(labels));
}

LabelVocabulary LabelVocabulary::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file '" + path + "'");
  return from_stream(in);
}

std::optional<std::size_t> LabelVocabulary::index_of(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace annrel
