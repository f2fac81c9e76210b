#include "core/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "core/error.hpp"

namespace annrel {
namespace {

constexpr char kFieldSep = '\x1f';

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void expect_header(std::istream& in, std::string_view expected) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("missing header, expected \"" + std::string(expected) + "\"", 1);
  }
  if (strip_cr(line) != expected) {
    throw ParseError("bad header \"" + std::string(strip_cr(line)) + "\", expected \"" +
                         std::string(expected) + "\"",
                     1);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish_output(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out.good()) throw IoError("write failed for " + path);
}

double parse_unit_interval(std::string_view text, std::string_view what, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("malformed " + std::string(what) + " \"" + std::string(text) + "\"", line);
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ParseError(std::string(what) + " out of range [0,1]: " + std::string(text), line);
  }
  return value;
}

std::uint8_t parse_binary(std::string_view text, std::size_t line) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw ParseError("value must be 0 or 1, got \"" + std::string(text) + "\"", line);
}

}  // namespace

std::vector<CampaignRecord> parse_campaign(std::istream& in, const LabelVocabulary& vocab) {
  expect_header(in, "file_id,annotator_id,labels");
  std::vector<CampaignRecord> records;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), line_no);
    }
    if (fields[0].empty()) throw ParseError("empty file_id", line_no);
    if (fields[1].empty()) throw ParseError("empty annotator_id", line_no);

    CampaignRecord rec;
    rec.file_id = std::string(fields[0]);
    rec.annotator_id = std::string(fields[1]);
    std::string key = rec.file_id + kFieldSep + rec.annotator_id;
    if (!seen.insert(std::move(key)).second) {
      throw ParseError("duplicate annotation for file \"" + rec.file_id +
                           "\" by annotator \"" + rec.annotator_id + "\"",
                       line_no);
    }
    if (!fields[2].empty()) {
      std::unordered_set<std::string_view> in_row;
      for (const std::string_view label : split(fields[2], ';')) {
        if (label.empty()) throw ParseError("empty label in selection", line_no);
        if (!vocab.contains(label)) {
          throw ParseError("unknown label \"" + std::string(label) + "\"", line_no);
        }
        if (!in_row.insert(label).second) {
          throw ParseError("label \"" + std::string(label) + "\" listed twice", line_no);
        }
        rec.selected.emplace_back(label);
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<CampaignRecord> parse_campaign_file(const std::string& path,
                                                const LabelVocabulary& vocab) {
  auto in = open_input(path);
  return parse_campaign(in, vocab);
}

AnnotationMatrix read_items_csv(std::istream& in,
                                const std::optional<LabelVocabulary>& vocab) {
  expect_header(in, "file_id,label,annotator_id,value");

  struct RawCell {
    std::string file_id;
    std::string label;
    std::string annotator_id;
    std::uint8_t value;
  };
  std::vector<RawCell> cells;
  std::vector<std::string> label_order;  // first appearance, used when inferring
  StringIndexMap label_seen;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    }
    if (fields[0].empty()) throw ParseError("empty file_id", line_no);
    if (fields[1].empty()) throw ParseError("empty label", line_no);
    if (fields[2].empty()) throw ParseError("empty annotator_id", line_no);
    if (vocab.has_value()) {
      if (!vocab->contains(fields[1])) {
        throw ParseError("unknown label \"" + std::string(fields[1]) + "\"", line_no);
      }
    } else if (label_seen.find(fields[1]) == label_seen.end()) {
      label_seen.emplace(std::string(fields[1]), label_order.size());
      label_order.emplace_back(fields[1]);
    }
    RawCell cell{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                 parse_binary(fields[3], line_no)};
    std::string key = cell.file_id + kFieldSep + cell.label + kFieldSep + cell.annotator_id;
    if (!seen.insert(std::move(key)).second) {
      throw ParseError("duplicate cell for (" + cell.file_id + ", " + cell.label + ", " +
                           cell.annotator_id + ")",
                       line_no);
    }
    cells.push_back(std::move(cell));
  }

  const LabelVocabulary effective =
      vocab.has_value() ? *vocab : LabelVocabulary(std::move(label_order));

  std::vector<std::string> files;
  StringIndexMap file_index;
  std::vector<std::string> annotators;
  StringIndexMap annotator_index;
  for (const RawCell& cell : cells) {
    if (file_index.find(cell.file_id) == file_index.end()) {
      file_index.emplace(cell.file_id, files.size());
      files.push_back(cell.file_id);
    }
    if (annotator_index.find(cell.annotator_id) == annotator_index.end()) {
      annotator_index.emplace(cell.annotator_id, annotators.size());
      annotators.push_back(cell.annotator_id);
    }
  }
  std::sort(files.begin(), files.end());
  std::sort(annotators.begin(), annotators.end());
  file_index.clear();
  annotator_index.clear();
  for (std::size_t i = 0; i < files.size(); ++i) file_index.emplace(files[i], i);
  for (std::size_t j = 0; j < annotators.size(); ++j) annotator_index.emplace(annotators[j], j);

  std::vector<ItemId> items;
  items.reserve(files.size() * effective.size());
  for (const std::string& file : files) {
    for (const std::string& label : effective.labels()) {
      items.push_back(ItemId{file, label});
    }
  }

  std::vector<AnnotationMatrix::Entry> entries;
  entries.reserve(cells.size());
  for (const RawCell& cell : cells) {
    const std::size_t file = file_index.find(cell.file_id)->second;
    const std::size_t label = *effective.index_of(cell.label);
    entries.push_back(AnnotationMatrix::Entry{
        file * effective.size() + label, annotator_index.find(cell.annotator_id)->second,
        cell.value});
  }
  return AnnotationMatrix(effective, std::move(items), std::move(annotators), entries);
}

AnnotationMatrix read_items_csv_file(const std::string& path,
                                     const std::optional<LabelVocabulary>& vocab) {
  auto in = open_input(path);
  return read_items_csv(in, vocab);
}

void write_items_csv(const AnnotationMatrix& matrix, std::ostream& out) {
  out << "file_id,label,annotator_id,value\n";
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const ItemId& item = matrix.item(i);
    for (const auto& resp : matrix.responses(i)) {
      out << item.file_id << ',' << item.label << ',' << matrix.annotator(resp.annotator)
          << ',' << int(resp.value) << '\n';
    }
  }
}

void write_items_csv_file(const AnnotationMatrix& matrix, const std::string& path) {
  auto out = open_output(path);
  write_items_csv(matrix, out);
  finish_output(out, path);
}

std::vector<std::pair<std::string, double>> read_competence_csv(std::istream& in) {
  expect_header(in, "annotator_id,theta");
  std::vector<std::pair<std::string, double>> rows;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) {
      throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), line_no);
    }
    if (fields[0].empty()) throw ParseError("empty annotator_id", line_no);
    if (!seen.insert(std::string(fields[0])).second) {
      throw ParseError("duplicate annotator \"" + std::string(fields[0]) + "\"", line_no);
    }
    rows.emplace_back(std::string(fields[0]), parse_unit_interval(fields[1], "theta", line_no));
  }
  return rows;
}

std::vector<std::pair<std::string, double>> read_competence_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_competence_csv(in);
}

void write_competence_csv(const std::vector<std::string>& annotators,
                          const std::vector<double>& theta, std::ostream& out) {
  if (annotators.size() != theta.size()) {
    throw InvalidArgument("annotator and theta counts differ");
  }
  out << "annotator_id,theta\n";
  for (std::size_t j = 0; j < annotators.size(); ++j) {
    out << annotators[j] << ',' << format_double(theta[j]) << '\n';
  }
}

void write_competence_csv_file(const std::vector<std::string>& annotators,
                               const std::vector<double>& theta, const std::string& path) {
  auto out = open_output(path);
  write_competence_csv(annotators, theta, out);
  finish_output(out, path);
}

TruthTable TruthTable::from_stream(std::istream& in) {
  expect_header(in, "file_id,label,value");
  TruthTable table;
  std::string raw;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), line_no);
    }
    if (fields[0].empty()) throw ParseError("empty file_id", line_no);
    if (fields[1].empty()) throw ParseError("empty label", line_no);
    std::string key = std::string(fields[0]) + kFieldSep + std::string(fields[1]);
    if (table.values_.find(key) != table.values_.end()) {
      throw ParseError("duplicate truth entry for (" + std::string(fields[0]) + ", " +
                           std::string(fields[1]) + ")",
                       line_no);
    }
    table.values_.emplace(std::move(key), parse_binary(fields[2], line_no));
  }
  return table;
}

TruthTable TruthTable::from_file(const std::string& path) {
  auto in = open_input(path);
  return from_stream(in);
}

void TruthTable::set(std::string_view file_id, std::string_view label, std::uint8_t value) {
  std::string key = std::string(file_id) + kFieldSep + std::string(label);
  values_[std::move(key)] = value;
}

std::optional<std::uint8_t> TruthTable::value(std::string_view file_id,
                                              std::string_view label) const {
  std::string key = std::string(file_id) + kFieldSep + std::string(label);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return std::uint8_t(it->second);
}

}  // namespace annrel
