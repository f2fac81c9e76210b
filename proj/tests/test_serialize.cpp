#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/agreement.hpp"
#include "core/aggregate.hpp"
#include "core/error.hpp"
#include "core/mace.hpp"
#include "core/serialize.hpp"
#include "core/text.hpp"

using namespace annrel;

TEST_CASE("doubles format with shortest round trip text") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(50.0) == "50");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("alpha report json carries the diagnostic fields") {
  AnnotationMatrix m(LabelVocabulary({"x"}), {{"f0", "x"}, {"f1", "x"}},
                     {"ann0", "ann1"},
                     {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}});
  const ordered_json doc = alpha_report_json(nominal_alpha(m));
  CHECK(doc["scope"] == "overall");
  CHECK(doc["alpha"] == 1.0);
  CHECK(doc["reason"] == "none");
  CHECK(doc.contains("d_o"));
  CHECK(doc.contains("d_e"));
  CHECK(doc["n"] == 4.0);
  CHECK(doc["units_used"] == 2);
  CHECK(doc["excluded_units"] == 0);

  const ordered_json undefined = alpha_report_json(nominal_alpha(AnnotationMatrix()));
  CHECK(undefined["alpha"].is_null());
  CHECK(undefined["reason"] == "insufficient_data");
}

TEST_CASE("stats csv is sorted by count descending") {
  LabelStatistics stats;
  stats.method = "union";
  stats.labels = {"a", "b", "c"};
  stats.per_label_counts = {2, 9, 2};
  std::ostringstream out;
  write_stats_csv(stats, out);
  CHECK(out.str() ==
        "label,count\n"
        "b,9\n"
        "a,2\n"
        "c,2\n");
}

TEST_CASE("labels csv layout") {
  GroundTruthEstimate estimate;
  estimate.vocab = LabelVocabulary({"x"});
  estimate.items = {{"f0", "x"}, {"f1", "x"}};
  estimate.decisions = {1, 0};
  estimate.confidence = {0.75, 0.5};
  estimate.kept = {1, 0};
  estimate.method = "mace@50";
  std::ostringstream out;
  write_labels_csv(estimate, out);
  CHECK(out.str() ==
        "file_id,label,decision,confidence,kept\n"
        "f0,x,1,0.75,1\n"
        "f1,x,0,0.5,0\n");
}

TEST_CASE("model json rejects a mismatched estimate") {
  MaceModel model;
  model.vocab = LabelVocabulary({"x"});
  model.items = {{"f0", "x"}};
  model.posterior_positive = {0.9};
  model.theta = {0.5};
  model.xi = {{0.5, 0.5}};
  model.annotator_ids = {"ann0"};
  model.restarts.resize(1);
  GroundTruthEstimate estimate = predict(model);
  CHECK_NOTHROW(model_json(model, estimate));
  estimate.items.push_back({"f1", "x"});
  estimate.decisions.push_back(0);
  estimate.confidence.push_back(0.5);
  estimate.kept.push_back(1);
  CHECK_THROWS_AS(model_json(model, estimate), InvalidArgument);
}

TEST_CASE("recovery rows count kept items only") {
  GroundTruthEstimate estimate;
  estimate.vocab = LabelVocabulary({"x"});
  estimate.items = {{"f0", "x"}, {"f1", "x"}, {"f2", "x"}};
  estimate.decisions = {1, 0, 1};
  estimate.confidence = {0.9, 0.8, 0.7};
  estimate.kept = {1, 1, 0};
  estimate.method = "mace@66";

  std::istringstream truth_csv(
      "file_id,label,value\n"
      "f0,x,1\n"
      "f1,x,1\n"
      "f2,x,1\n");
  const TruthTable truth = TruthTable::from_stream(truth_csv);
  const RecoveryRow row = recovery_against_truth(estimate, truth);
  CHECK(row.method == "mace@66");
  CHECK(row.items == 2);
  CHECK(row.correct == 1);

  std::ostringstream out;
  write_recovery_csv({row}, out);
  CHECK(out.str() ==
        "method,items,correct,accuracy\n"
        "mace@66,2,1,0.5\n");
}

TEST_CASE("campaign spec json round trip") {
  const nlohmann::json doc = nlohmann::json::parse(R"({
    "num_files": 12,
    "labels": ["p", "q"],
    "files_per_annotator": 6,
    "seed": 99,
    "truth_prevalence": {"p": 0.2, "q": 0.7},
    "annotators": [
      {"id": "solo", "competence": 0.95, "spam_dist": [0.1, 0.9]}
    ],
    "groups": [
      {"count": 3, "prefix": "crowd", "competence": 0.6}
    ]
  })");
  const CampaignSpec spec = campaign_spec_from_json(doc);
  CHECK(spec.num_files == 12);
  CHECK(spec.seed == 99);
  REQUIRE(spec.annotators.size() == 4);
  CHECK(spec.annotators[0].id == "solo");
  CHECK(spec.annotators[0].spam_dist[1] == doctest::Approx(0.9));
  CHECK(spec.annotators[1].id == "crowd0");
  CHECK(spec.annotators[3].id == "crowd2");
  CHECK(spec.truth_prevalence == std::vector<double>{0.2, 0.7});

  // Canonical form re-parses to the same spec.
  const CampaignSpec back = campaign_spec_from_json(campaign_spec_json(spec));
  CHECK(back.num_files == spec.num_files);
  CHECK(back.seed == spec.seed);
  CHECK(back.truth_prevalence == spec.truth_prevalence);
  REQUIRE(back.annotators.size() == spec.annotators.size());
  for (std::size_t i = 0; i < spec.annotators.size(); ++i) {
    CHECK(back.annotators[i].id == spec.annotators[i].id);
    CHECK(back.annotators[i].competence == spec.annotators[i].competence);
  }
}

TEST_CASE("campaign spec json rejects unknown keys and bad labels") {
  const nlohmann::json base = nlohmann::json::parse(R"({
    "num_files": 4,
    "labels": ["p"],
    "files_per_annotator": 2,
    "annotators": [{"id": "a", "competence": 1.0}]
  })");
  CHECK_NOTHROW(campaign_spec_from_json(base));

  nlohmann::json doc = base;
  doc["surprise"] = 1;
  CHECK_THROWS_AS(campaign_spec_from_json(doc), ParseError);

  doc = base;
  doc["truth_prevalence"] = {{"zz", 0.5}};
  CHECK_THROWS_AS(campaign_spec_from_json(doc), ParseError);

  doc = base;
  doc.erase("labels");
  CHECK_THROWS_AS(campaign_spec_from_json(doc), ParseError);

  doc = base;
  doc["annotators"][0]["competence"] = 2.0;
  CHECK_THROWS_AS(campaign_spec_from_json(doc), ParseError);
}

TEST_CASE("scalar prevalence applies to every label") {
  const nlohmann::json doc = nlohmann::json::parse(R"({
    "num_files": 4,
    "labels": ["p", "q", "r"],
    "files_per_annotator": 2,
    "truth_prevalence": 0.25,
    "annotators": [{"id": "a", "competence": 1.0}]
  })");
  const CampaignSpec spec = campaign_spec_from_json(doc);
  CHECK(spec.truth_prevalence == std::vector<double>{0.25, 0.25, 0.25});
}

TEST_CASE("class threshold table layout") {
  AnnotationMatrix m(LabelVocabulary({"p", "q"}),
                     {{"f0", "p"}, {"f0", "q"}, {"f1", "p"}, {"f1", "q"}},
                     {"ann0", "ann1"},
                     {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 1},
                      {2, 0, 0}, {2, 1, 0}, {3, 0, 1}, {3, 1, 0}});
  const std::vector<std::vector<AlphaReport>> sweeps{alpha_by_class(m),
                                                     alpha_by_class(m)};
  std::ostringstream out;
  write_class_threshold_csv({"all", "ge_0.6"}, sweeps, out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "class,all,ge_0.6");
  std::getline(lines, line);
  CHECK(line.rfind("p,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("q,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("overall,", 0) == 0);
}
