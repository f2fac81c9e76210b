#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/matrix.hpp"
#include "core/vocab.hpp"

namespace annrel {

struct AnnotatorSpec {
  std::string id;
  double competence = 1.0;               // probability of copying the truth
  std::array<double, 2> spam_dist{0.5, 0.5};
};

/// Generative description of a campaign: planted per-item truth, a population
/// of annotators, and a uniform without-replacement file assignment.
struct CampaignSpec {
  std::size_t num_files = 0;
  LabelVocabulary vocab;
  std::vector<AnnotatorSpec> annotators;
  std::size_t files_per_annotator = 0;
  std::vector<double> truth_prevalence;  // per label; empty means 0.5 each
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidArgument
  double prevalence(std::size_t label) const {
    return truth_prevalence.empty() ? 0.5 : truth_prevalence[label];
  }
};

/// Generated campaign with its latent state retained: the planted truth per
/// item row and, mirroring each row's stored responses, whether that response
/// came from the spam branch. Wherever spam is 0 the cell equals the truth.
struct SyntheticCampaign {
  std::vector<CampaignRecord> records;
  AnnotationMatrix matrix;
  std::vector<std::uint8_t> truth;
  std::vector<std::vector<std::uint8_t>> spam_events;
  std::uint64_t seed = 0;
};

/// "prefix" + zero-padded index, wide enough for count-1.
std::vector<std::string> sequential_ids(std::string_view prefix, std::size_t count);

/// Draw the campaign a CampaignSpec describes. Truth uses one RNG substream,
/// each annotator another, so output is fully determined by spec.seed.
SyntheticCampaign generate_campaign(const CampaignSpec& spec);

/// Population of zero-competence annotators with uniform spam distributions.
/// Defaults give 150 annotators, 130 of 3930 files each, 10 labels.
CampaignSpec spammers_spec(std::uint64_t seed, std::size_t num_annotators = 150,
                           std::size_t files_per_annotator = 130,
                           std::size_t num_files = 3930, std::size_t num_labels = 10);
SyntheticCampaign generate_spammers(std::uint64_t seed, std::size_t num_annotators = 150,
                                    std::size_t files_per_annotator = 130,
                                    std::size_t num_files = 3930, std::size_t num_labels = 10);

/// Fraction of each annotator's responses that came from the spam branch.
/// NaN-free: annotators with no responses report 0.
std::vector<double> realized_spam_fraction(const SyntheticCampaign& campaign);

}  // namespace annrel
