#include "core/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace annrel {

void CampaignSpec::validate() const {
  if (num_files == 0) throw InvalidArgument("num_files must be positive");
  if (vocab.empty()) throw InvalidArgument("vocabulary must not be empty");
  if (annotators.empty()) throw InvalidArgument("at least one annotator is required");
  if (files_per_annotator == 0) throw InvalidArgument("files_per_annotator must be positive");
  if (files_per_annotator > num_files) {
    throw InvalidArgument("files_per_annotator exceeds num_files");
  }
  std::unordered_set<std::string> ids;
  for (const AnnotatorSpec& ann : annotators) {
    if (ann.id.empty()) throw InvalidArgument("annotator id must not be empty");
    if (!ids.insert(ann.id).second) {
      throw InvalidArgument("duplicate annotator id \"" + ann.id + "\"");
    }
    if (!(ann.competence >= 0.0 && ann.competence <= 1.0)) {
      throw InvalidArgument("competence of \"" + ann.id + "\" outside [0,1]");
    }
    if (!(ann.spam_dist[0] >= 0.0) || !(ann.spam_dist[1] >= 0.0) ||
        std::abs(ann.spam_dist[0] + ann.spam_dist[1] - 1.0) > 1e-9) {
      throw InvalidArgument("spam distribution of \"" + ann.id + "\" is not normalized");
    }
  }
  if (!truth_prevalence.empty()) {
    if (truth_prevalence.size() != vocab.size()) {
      throw InvalidArgument("truth_prevalence must cover every label");
    }
    for (const double p : truth_prevalence) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("prevalence outside [0,1]");
    }
  }
}

std::vector<std::string> sequential_ids(std::string_view prefix, std::size_t count) {
  std::size_t width = 1;
  for (std::size_t max = count > 0 ? count - 1 : 0; max >= 10; max /= 10) ++width;
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back(std::string(prefix) + std::string(width - digits.size(), '0') + digits);
  }
  return ids;
}

SyntheticCampaign generate_campaign(const CampaignSpec& spec) {
  spec.validate();
  const std::size_t L = spec.vocab.size();
  const std::size_t F = spec.num_files;
  const std::size_t J = spec.annotators.size();
  const std::vector<std::string> file_ids = sequential_ids("f", F);

  // Planted truth, one flat row-major table indexed file * L + label.
  std::vector<std::uint8_t> truth(F * L);
  {
    auto eng = make_engine(spec.seed, 0);
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t l = 0; l < L; ++l) {
        truth[f * L + l] = bernoulli(eng, spec.prevalence(l)) ? 1 : 0;
      }
    }
  }

  SyntheticCampaign out;
  out.seed = spec.seed;

  // The matrix covers the full file x vocabulary universe, including files no
  // annotator happened to draw; item i = file * L + label index.
  std::vector<ItemId> items;
  items.reserve(F * L);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t l = 0; l < L; ++l) items.push_back({file_ids[f], spec.vocab.label(l)});
  }
  std::vector<std::string> column_ids;
  column_ids.reserve(J);
  for (const AnnotatorSpec& ann : spec.annotators) column_ids.push_back(ann.id);
  std::sort(column_ids.begin(), column_ids.end());
  StringIndexMap column_of;
  column_of.reserve(J);
  for (std::size_t c = 0; c < J; ++c) column_of.emplace(column_ids[c], c);

  // spam flag per generated response, keyed item * J + column
  std::unordered_map<std::uint64_t, std::uint8_t> spam_flag;
  spam_flag.reserve(J * spec.files_per_annotator * L);
  std::vector<AnnotationMatrix::Entry> entries;
  entries.reserve(J * spec.files_per_annotator * L);

  std::vector<std::size_t> pool(F);
  for (std::size_t j = 0; j < J; ++j) {
    const AnnotatorSpec& ann = spec.annotators[j];
    const std::size_t column = column_of.find(ann.id)->second;
    auto eng = make_engine(spec.seed, 1 + j);

    // Partial Fisher-Yates draw of distinct files, then ascending order so
    // the response stream does not depend on the draw order.
    std::iota(pool.begin(), pool.end(), std::size_t(0));
    for (std::size_t k = 0; k < spec.files_per_annotator; ++k) {
      std::swap(pool[k], pool[k + uniform_index(eng, F - k)]);
    }
    std::vector<std::size_t> assigned(pool.begin(), pool.begin() + spec.files_per_annotator);
    std::sort(assigned.begin(), assigned.end());

    for (const std::size_t f : assigned) {
      CampaignRecord rec;
      rec.file_id = file_ids[f];
      rec.annotator_id = ann.id;
      for (std::size_t l = 0; l < L; ++l) {
        std::uint8_t value;
        std::uint8_t spam;
        if (bernoulli(eng, ann.competence)) {
          value = truth[f * L + l];
          spam = 0;
        } else {
          value = bernoulli(eng, ann.spam_dist[1]) ? 1 : 0;
          spam = 1;
        }
        const std::size_t item = f * L + l;
        spam_flag.emplace(std::uint64_t(item) * J + column, spam);
        entries.push_back({item, column, value});
        if (value) rec.selected.push_back(spec.vocab.label(l));
      }
      out.records.push_back(std::move(rec));
    }
  }

  out.matrix = AnnotationMatrix(spec.vocab, std::move(items), std::move(column_ids), entries);

  const std::size_t N = out.matrix.num_items();
  out.truth.assign(truth.begin(), truth.end());
  out.spam_events.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto row = out.matrix.responses(i);
    auto& spam_row = out.spam_events[i];
    spam_row.resize(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      spam_row[k] = spam_flag.find(std::uint64_t(i) * J + row[k].annotator)->second;
    }
  }
  return out;
}

CampaignSpec spammers_spec(std::uint64_t seed, std::size_t num_annotators,
                           std::size_t files_per_annotator, std::size_t num_files,
                           std::size_t num_labels) {
  CampaignSpec spec;
  spec.num_files = num_files;
  spec.vocab = LabelVocabulary(sequential_ids("label", num_labels));
  spec.files_per_annotator = files_per_annotator;
  spec.seed = seed;
  for (std::string& id : sequential_ids("ann", num_annotators)) {
    spec.annotators.push_back(AnnotatorSpec{std::move(id), 0.0, {0.5, 0.5}});
  }
  return spec;
}

SyntheticCampaign generate_spammers(std::uint64_t seed, std::size_t num_annotators,
                                    std::size_t files_per_annotator, std::size_t num_files,
                                    std::size_t num_labels) {
  return generate_campaign(
      spammers_spec(seed, num_annotators, files_per_annotator, num_files, num_labels));
}

std::vector<double> realized_spam_fraction(const SyntheticCampaign& campaign) {
  const std::size_t M = campaign.matrix.num_annotators();
  std::vector<std::size_t> spam(M, 0);
  std::vector<std::size_t> total(M, 0);
  for (std::size_t i = 0; i < campaign.matrix.num_items(); ++i) {
    const auto row = campaign.matrix.responses(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      ++total[row[k].annotator];
      spam[row[k].annotator] += campaign.spam_events[i][k];
    }
  }
  std::vector<double> fraction(M, 0.0);
  for (std::size_t j = 0; j < M; ++j) {
    if (total[j] > 0) fraction[j] = double(spam[j]) / double(total[j]);
  }
  return fraction;
}

}  // namespace annrel
