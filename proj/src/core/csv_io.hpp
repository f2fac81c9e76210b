#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/matrix.hpp"
#include "core/text.hpp"
#include "core/vocab.hpp"

namespace annrel {

// Campaign format: header `file_id,annotator_id,labels`, one line per
// submitted annotation pass; the labels field is a `;`-separated subset of the
// vocabulary, possibly empty.
//
// Item format (long form): header `file_id,label,annotator_id,value` with
// value 0/1; triples that are absent are missing cells. Reading rebuilds the
// full file x vocabulary grid, with files sorted lexicographically and
// annotators sorted by id. When no vocabulary is supplied the label order is
// the order of first appearance in the stream.

std::vector<CampaignRecord> parse_campaign(std::istream& in, const LabelVocabulary& vocab);
std::vector<CampaignRecord> parse_campaign_file(const std::string& path,
                                                const LabelVocabulary& vocab);

AnnotationMatrix read_items_csv(std::istream& in,
                                const std::optional<LabelVocabulary>& vocab);
AnnotationMatrix read_items_csv_file(const std::string& path,
                                     const std::optional<LabelVocabulary>& vocab);

void write_items_csv(const AnnotationMatrix& matrix, std::ostream& out);
void write_items_csv_file(const AnnotationMatrix& matrix, const std::string& path);

/// `annotator_id,theta` pairs; theta must lie in [0, 1].
std::vector<std::pair<std::string, double>> read_competence_csv(std::istream& in);
std::vector<std::pair<std::string, double>> read_competence_csv_file(const std::string& path);
void write_competence_csv(const std::vector<std::string>& annotators,
                          const std::vector<double>& theta, std::ostream& out);
void write_competence_csv_file(const std::vector<std::string>& annotators,
                               const std::vector<double>& theta, const std::string& path);

/// `file_id,label,value` triples with value 0/1.
class TruthTable {
 public:
  TruthTable() = default;

  static TruthTable from_stream(std::istream& in);
  static TruthTable from_file(const std::string& path);

  void set(std::string_view file_id, std::string_view label, std::uint8_t value);
  std::optional<std::uint8_t> value(std::string_view file_id, std::string_view label) const;
  std::size_t size() const { return values_.size(); }

 private:
  StringIndexMap values_;  // value stored in the mapped index (0/1)
};

}  // namespace annrel
