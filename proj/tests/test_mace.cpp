#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/error.hpp"
#include "core/mace.hpp"
#include "core/matrix.hpp"

using namespace annrel;

namespace {

AnnotationMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t cols = rows.empty() ? 1 : rows[0].size();
  LabelVocabulary vocab({"x"});
  std::vector<ItemId> items;
  std::vector<std::string> anns;
  for (std::size_t i = 0; i < rows.size(); ++i) items.push_back({"f" + std::to_string(i), "x"});
  for (std::size_t j = 0; j < cols; ++j) anns.push_back("ann" + std::to_string(j));
  std::vector<AnnotationMatrix::Entry> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j] >= 0) cells.push_back({i, j, std::uint8_t(rows[i][j])});
    }
  }
  return AnnotationMatrix(vocab, items, anns, cells);
}

// Likelihood by exhaustive enumeration of all 2^N truth assignments, summed
// with one global log-sum-exp. Independent of the per-item factorization the
// library uses.
double brute_force_ll(const AnnotationMatrix& m, const std::vector<double>& theta,
                      const std::vector<std::array<double, 2>>& xi) {
  const std::size_t n = m.num_items();
  REQUIRE(n <= 20);
  std::vector<double> log_terms;
  log_terms.reserve(std::size_t(1) << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    double lp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int t = int((mask >> i) & 1);
      lp += std::log(0.5);
      for (const auto& r : m.responses(i)) {
        lp += std::log(observation_likelihood(theta[r.annotator], xi[r.annotator],
                                              int(r.value), t));
      }
    }
    log_terms.push_back(lp);
  }
  const double top = *std::max_element(log_terms.begin(), log_terms.end());
  double sum = 0.0;
  for (double lt : log_terms) sum += std::exp(lt - top);
  return top + std::log(sum);
}

std::vector<std::vector<int>> random_rows(std::mt19937& gen, int max_items) {
  std::uniform_int_distribution<int> rows_dist(1, max_items);
  std::uniform_int_distribution<int> cols_dist(2, 5);
  std::uniform_int_distribution<int> cell_dist(0, 3);
  const int rows = rows_dist(gen);
  const int cols = cols_dist(gen);
  std::vector<std::vector<int>> out(rows, std::vector<int>(cols, -1));
  for (auto& row : out) {
    for (int& cell : row) {
      const int draw = cell_dist(gen);
      cell = draw <= 1 ? draw : -1;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("observation likelihood closed form") {
  const std::array<double, 2> xi{0.3, 0.7};
  CHECK(observation_likelihood(0.8, xi, 1, 1) == doctest::Approx(0.94));
  CHECK(observation_likelihood(0.8, xi, 0, 1) == doctest::Approx(0.06));
  CHECK(observation_likelihood(0.8, xi, 1, 0) == doctest::Approx(0.14));
  CHECK(observation_likelihood(0.8, xi, 0, 0) == doctest::Approx(0.86));
  // Rows sum to one for any parameter choice.
  CHECK(observation_likelihood(0.37, xi, 0, 1) + observation_likelihood(0.37, xi, 1, 1) ==
        doctest::Approx(1.0));
}

TEST_CASE("observation likelihood matches a simulated annotator") {
  const double theta = 0.65;
  const std::array<double, 2> xi{0.2, 0.8};
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int draws = 200000;
  for (int t = 0; t <= 1; ++t) {
    int ones = 0;
    for (int k = 0; k < draws; ++k) {
      const int a = unit(gen) < theta ? t : (unit(gen) < xi[1] ? 1 : 0);
      ones += a;
    }
    const double p1 = observation_likelihood(theta, xi, 1, t);
    const double sigma = std::sqrt(p1 * (1.0 - p1) / draws);
    CHECK(std::fabs(double(ones) / draws - p1) < 4.0 * sigma + 1e-12);
  }
}

TEST_CASE("log likelihood matches exhaustive truth enumeration") {
  std::mt19937 gen(4242);
  std::uniform_real_distribution<double> theta_dist(0.05, 0.95);
  std::uniform_real_distribution<double> xi_dist(0.05, 0.95);
  for (int trial = 0; trial < 10; ++trial) {
    const AnnotationMatrix m = from_rows(random_rows(gen, 10));
    std::vector<double> theta;
    std::vector<std::array<double, 2>> xi;
    for (std::size_t j = 0; j < m.num_annotators(); ++j) {
      theta.push_back(theta_dist(gen));
      const double x1 = xi_dist(gen);
      xi.push_back({1.0 - x1, x1});
    }
    const double fast = log_likelihood(m, theta, xi);
    const double slow = brute_force_ll(m, theta, xi);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-11));
  }
}

TEST_CASE("items without responses contribute nothing to the likelihood") {
  const AnnotationMatrix with_gap = from_rows({{1, 1}, {-1, -1}, {0, 1}});
  const AnnotationMatrix without = from_rows({{1, 1}, {0, 1}});
  const std::vector<double> theta{0.7, 0.4};
  const std::vector<std::array<double, 2>> xi{{0.5, 0.5}, {0.3, 0.7}};
  CHECK(log_likelihood(with_gap, theta, xi) ==
        doctest::Approx(log_likelihood(without, theta, xi)).epsilon(1e-12));
}

TEST_CASE("config validation") {
  MaceConfig config;
  CHECK_NOTHROW(config.validate());
  config.restarts = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = MaceConfig{};
  config.tolerance = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = MaceConfig{};
  config.smoothing_delta = -0.1;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
}

TEST_CASE("fitting an empty matrix fails loudly") {
  const AnnotationMatrix empty = from_rows({{-1, -1}, {-1, -1}});
  MaceConfig config;
  config.restarts = 2;
  CHECK_THROWS_AS(em_fit(empty, config), NumericError);
}

TEST_CASE("unanimous annotators are judged competent") {
  // Five annotators, always identical, both categories present.
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 20; ++i) rows.push_back(std::vector<int>(5, i % 2));
  MaceConfig config;
  config.seed = 11;
  const MaceModel model = em_fit(from_rows(rows), config);
  for (double theta : model.theta) CHECK(theta >= 0.9);
  // Posteriors should be extreme and follow the unanimous value.
  for (int i = 0; i < 20; ++i) {
    if (i % 2 == 1) {
      CHECK(model.posterior_positive[i] > 0.9);
    } else {
      CHECK(model.posterior_positive[i] < 0.1);
    }
  }
}

TEST_CASE("fit is deterministic in the seed") {
  std::mt19937 gen(31337);
  const AnnotationMatrix m = from_rows(random_rows(gen, 12));
  MaceConfig config;
  config.seed = 5;
  config.restarts = 4;
  const MaceModel a = em_fit(m, config);
  const MaceModel b = em_fit(m, config);
  CHECK(a.theta == b.theta);
  CHECK(a.xi == b.xi);
  CHECK(a.posterior_positive == b.posterior_positive);
  CHECK(a.log_likelihood == b.log_likelihood);
  CHECK(a.best_restart == b.best_restart);
}

TEST_CASE("the winning restart has the highest final likelihood") {
  std::mt19937 gen(8);
  const AnnotationMatrix m = from_rows(random_rows(gen, 12));
  MaceConfig config;
  config.seed = 77;
  config.restarts = 6;
  const MaceModel model = em_fit(m, config);
  REQUIRE(model.restarts.size() == 6);
  for (const RestartSummary& restart : model.restarts) {
    CHECK(model.log_likelihood >= restart.final_log_likelihood);
  }
  CHECK(model.log_likelihood ==
        model.restarts[model.best_restart].final_log_likelihood);
  // The reported likelihood is the likelihood of the reported parameters.
  CHECK(model.log_likelihood ==
        doctest::Approx(log_likelihood(m, model.theta, model.xi)).epsilon(1e-9));
}

TEST_CASE("the smoothed objective never decreases within a run") {
  std::mt19937 gen(12);
  for (int trial = 0; trial < 5; ++trial) {
    const AnnotationMatrix m = from_rows(random_rows(gen, 12));
    MaceConfig config;
    config.seed = std::uint64_t(trial);
    config.restarts = 3;
    const MaceModel model = em_fit(m, config);
    for (const RestartSummary& restart : model.restarts) {
      for (std::size_t k = 1; k < restart.objective_trace.size(); ++k) {
        CHECK(restart.objective_trace[k] >=
              restart.objective_trace[k - 1] - 1e-9);
      }
      CHECK(restart.log_likelihood_trace.size() == restart.objective_trace.size());
    }
  }
}

TEST_CASE("expected spam mirrors the stored responses") {
  const AnnotationMatrix m = from_rows({{1, 0, 1}, {-1, 1, 0}, {1, 1, -1}});
  MaceConfig config;
  config.seed = 3;
  const MaceModel model = em_fit(m, config);
  REQUIRE(model.expected_spam.size() == m.num_items());
  for (std::size_t i = 0; i < m.num_items(); ++i) {
    REQUIRE(model.expected_spam[i].size() == m.responses_for(i));
    for (double r : model.expected_spam[i]) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("items with no responses sit at posterior one half") {
  const AnnotationMatrix m = from_rows({{1, 1}, {-1, -1}, {0, 0}});
  MaceConfig config;
  config.seed = 21;
  const MaceModel model = em_fit(m, config);
  CHECK(model.posterior_positive[1] == doctest::Approx(0.5));
}

TEST_CASE("predict breaks ties toward absent") {
  MaceModel model;
  model.vocab = LabelVocabulary({"x"});
  model.items = {{"f0", "x"}, {"f1", "x"}, {"f2", "x"}};
  model.posterior_positive = {0.5, 0.2, 0.8};
  const GroundTruthEstimate estimate = predict(model);
  CHECK(estimate.method == "mace");
  CHECK(estimate.decisions == std::vector<std::uint8_t>{0, 0, 1});
  CHECK(estimate.confidence[0] == doctest::Approx(0.5));
  CHECK(estimate.confidence[1] == doctest::Approx(0.8));
  CHECK(estimate.confidence[2] == doctest::Approx(0.8));
  CHECK(estimate.kept == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("threshold keeps the top slice by confidence") {
  GroundTruthEstimate estimate;
  estimate.vocab = LabelVocabulary({"x"});
  estimate.items = {{"f0", "x"}, {"f1", "x"}, {"f2", "x"}, {"f3", "x"}};
  estimate.decisions = {1, 0, 1, 0};
  estimate.confidence = {0.9, 0.5, 0.7, 0.5};
  estimate.kept = {1, 1, 1, 1};
  estimate.method = "mace";

  const GroundTruthEstimate half = threshold_at(estimate, 50.0);
  CHECK(half.method == "mace@50");
  CHECK(half.kept == std::vector<std::uint8_t>{1, 0, 1, 0});
  CHECK(half.decisions == estimate.decisions);  // decisions are untouched

  const GroundTruthEstimate quarter = threshold_at(estimate, 25.0);
  CHECK(quarter.kept == std::vector<std::uint8_t>{1, 0, 0, 0});

  const GroundTruthEstimate all = threshold_at(estimate, 100.0);
  CHECK(all.kept == std::vector<std::uint8_t>{1, 1, 1, 1});

  // ceil(0.3 * 4) = 2.
  const GroundTruthEstimate odd = threshold_at(estimate, 30.0);
  CHECK(std::count(odd.kept.begin(), odd.kept.end(), 1) == 2);

  CHECK_THROWS_AS(threshold_at(estimate, 0.0), InvalidArgument);
  CHECK_THROWS_AS(threshold_at(estimate, -5.0), InvalidArgument);
  CHECK_THROWS_AS(threshold_at(estimate, 100.5), InvalidArgument);
}

TEST_CASE("threshold ties keep the earlier item") {
  GroundTruthEstimate estimate;
  estimate.vocab = LabelVocabulary({"x"});
  estimate.items = {{"f0", "x"}, {"f1", "x"}, {"f2", "x"}, {"f3", "x"}};
  estimate.decisions = {0, 0, 0, 0};
  estimate.confidence = {0.6, 0.6, 0.6, 0.6};
  estimate.kept = {1, 1, 1, 1};
  estimate.method = "mace";
  const GroundTruthEstimate half = threshold_at(estimate, 50.0);
  CHECK(half.kept == std::vector<std::uint8_t>{1, 1, 0, 0});
}
