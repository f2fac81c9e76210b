// Acceptance gate: one line per criterion, [PASS]/[FAIL], nonzero exit when
// anything fails. Tolerances are pinned here, next to the checks they guard.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "core/aggregate.hpp"
#include "core/agreement.hpp"
#include "core/error.hpp"
#include "core/mace.hpp"
#include "core/matrix.hpp"
#include "core/simulate.hpp"

namespace fs = std::filesystem;
using namespace annrel;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

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

std::vector<std::vector<int>> random_rows(std::mt19937& gen, int max_items, int max_cols,
                                          bool require_cell) {
  std::uniform_int_distribution<int> rows_dist(1, max_items);
  std::uniform_int_distribution<int> cols_dist(2, max_cols);
  std::uniform_int_distribution<int> cell_dist(0, 3);
  for (;;) {
    const int rows = rows_dist(gen);
    const int cols = cols_dist(gen);
    std::vector<std::vector<int>> out(rows, std::vector<int>(cols, -1));
    int stored = 0;
    for (auto& row : out) {
      for (int& cell : row) {
        const int draw = cell_dist(gen);
        cell = draw <= 1 ? draw : -1;
        stored += cell >= 0;
      }
    }
    if (!require_cell || stored > 0) return out;
  }
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(6);
  out << value;
  return out.str();
}

/* ---- criterion 1 ---- */

void criterion_1() {
  const AnnotationMatrix m = from_rows({{1, 1}, {1, 0}, {0, 0}, {0, 0}});
  nominal_alpha(m);  // warm up
  const auto start = Clock::now();
  const AlphaReport via_disagreement = nominal_alpha(m);
  const auto closed = alpha_closed_form(coincidences(m));
  const double elapsed_ms = ms_since(start);

  const double expected = 16.0 / 30.0;
  bool pass = via_disagreement.alpha.has_value() && closed.has_value();
  if (pass) {
    pass = std::fabs(*via_disagreement.alpha - expected) <= 1e-9 &&
           std::fabs(*closed - expected) <= 1e-9;
  }
  pass = pass && elapsed_ms < 1.0;
  std::ostringstream detail;
  if (via_disagreement.alpha && closed) {
    detail << "alpha=" << fmt(*via_disagreement.alpha) << " closed=" << fmt(*closed)
           << " expected=16/30, " << fmt(elapsed_ms * 1000.0) << "us";
  } else {
    detail << "alpha unexpectedly undefined";
  }
  report(1, "four-unit hand oracle via both routes", pass, detail.str());
}

/* ---- criterion 2 ---- */

void criterion_2() {
  bool pass = true;
  std::string problem;

  const std::vector<std::vector<std::vector<int>>> perfect{
      {{1, 1}, {0, 0}},
      {{1, 1, 1}, {0, 0, 0}, {1, 1, 1}},
      {{1, 1, -1}, {0, -1, 0}, {-1, 1, 1}, {0, 0, 0}},
  };
  for (const auto& rows : perfect) {
    const AlphaReport r = nominal_alpha(from_rows(rows));
    if (!r.alpha || *r.alpha != 1.0) {
      pass = false;
      problem = "perfect agreement did not give exactly 1";
    }
  }

  const std::vector<std::vector<std::vector<int>>> degenerate{
      {{1, 1}, {1, 1}},
      {{0, 0, 0}, {0, 0, -1}},
  };
  for (const auto& rows : degenerate) {
    const AlphaReport r = nominal_alpha(from_rows(rows));
    if (r.alpha || r.reason != AlphaUndefinedReason::single_category) {
      pass = false;
      problem = "single-category matrix was not flagged undefined";
    }
  }

  std::mt19937 gen(20240824);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const AnnotationMatrix m = from_rows(random_rows(gen, 12, 6, false));
    const AlphaReport r = nominal_alpha(m);
    const auto closed = alpha_closed_form(coincidences(m));
    if (r.alpha.has_value() != closed.has_value()) {
      pass = false;
      problem = "code paths disagree on definedness";
      continue;
    }
    if (r.alpha) worst = std::max(worst, std::fabs(*r.alpha - *closed));
  }
  if (worst > 1e-12) {
    pass = false;
    problem = "paths diverge by " + fmt(worst);
  }
  report(2, "alpha extremes and dual-path agreement", pass,
         pass ? "max path gap " + fmt(worst) + " over 50 random matrices" : problem);
}

/* ---- criterion 3 ---- */

void criterion_3() {
  const auto start = Clock::now();
  const SyntheticCampaign campaign = generate_spammers(1337);
  const AlphaReport overall = nominal_alpha(campaign.matrix);
  double mean = 0.0;
  for (const CampaignRecord& record : campaign.records) mean += double(record.selected.size());
  mean /= double(campaign.records.size());
  const double elapsed_ms = ms_since(start);

  // Each record selects Binomial(10, 0.5) labels: sd of the mean over 19500
  // records is sqrt(2.5 / 19500).
  const double three_sigma = 3.0 * std::sqrt(2.5 / double(campaign.records.size()));
  bool pass = overall.alpha.has_value();
  if (pass) pass = *overall.alpha > -0.02 && *overall.alpha < 0.02;
  pass = pass && std::fabs(mean - 5.0) <= three_sigma;
  pass = pass && elapsed_ms < 10000.0;

  std::ostringstream detail;
  detail << "alpha=" << (overall.alpha ? fmt(*overall.alpha) : "undefined")
         << " mean labels/record=" << fmt(mean) << " (band 5±" << fmt(three_sigma) << "), "
         << fmt(elapsed_ms) << "ms";
  report(3, "full-scale spammer population looks like chance", pass, detail.str());
}

/* ---- criterion 4 ---- */

double brute_force_ll(const AnnotationMatrix& m, const std::vector<double>& theta,
                      const std::vector<std::array<double, 2>>& xi) {
  const std::size_t n = m.num_items();
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

void criterion_4() {
  std::mt19937 gen(8675309);
  std::uniform_real_distribution<double> theta_dist(0.02, 0.98);
  std::uniform_real_distribution<double> xi_dist(0.02, 0.98);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const AnnotationMatrix m = from_rows(random_rows(gen, 12, 5, false));
    std::vector<double> theta;
    std::vector<std::array<double, 2>> xi;
    for (std::size_t j = 0; j < m.num_annotators(); ++j) {
      theta.push_back(theta_dist(gen));
      const double x1 = xi_dist(gen);
      xi.push_back({1.0 - x1, x1});
    }
    worst = std::max(worst,
                     std::fabs(log_likelihood(m, theta, xi) - brute_force_ll(m, theta, xi)));
  }
  report(4, "likelihood matches 2^N truth enumeration", worst <= 1e-9,
         "max |gap| " + fmt(worst) + " over 20 matrices");
}

/* ---- criterion 5 ---- */

void criterion_5() {
  std::mt19937 gen(157);
  double worst_ll_dip = 0.0;
  double worst_objective_dip = 0.0;
  int runs = 0;
  for (int matrix_idx = 0; matrix_idx < 25 && runs < 100; ++matrix_idx) {
    const AnnotationMatrix m = from_rows(random_rows(gen, 30, 6, true));
    for (std::uint64_t seed = 0; seed < 4 && runs < 100; ++seed) {
      MaceConfig config;
      config.seed = seed * 7919 + std::uint64_t(matrix_idx);
      config.restarts = 1;
      const MaceModel model = em_fit(m, config);
      for (const RestartSummary& restart : model.restarts) {
        ++runs;
        for (std::size_t k = 1; k < restart.log_likelihood_trace.size(); ++k) {
          worst_ll_dip = std::max(
              worst_ll_dip,
              restart.log_likelihood_trace[k - 1] - restart.log_likelihood_trace[k]);
          worst_objective_dip = std::max(
              worst_objective_dip,
              restart.objective_trace[k - 1] - restart.objective_trace[k]);
        }
      }
    }
  }
  // With add-delta smoothing the M-step maximizes the smoothed objective, the
  // same quantity the convergence rule monitors; that is the trace EM
  // guarantees monotone. The raw log-likelihood can dip by up to ~delta per
  // parameter and is reported alongside for reference.
  const bool pass = worst_objective_dip <= 1e-9;
  std::ostringstream detail;
  detail << runs << " runs, max objective dip " << fmt(worst_objective_dip)
         << " (raw log-likelihood dip " << fmt(worst_ll_dip)
         << ", expected under smoothing)";
  report(5, "EM objective never decreases within a run", pass, detail.str());
}

/* ---- criteria 6 and 8 share the planted campaign ---- */

struct PlantedFit {
  SyntheticCampaign campaign;
  MaceModel model;
  std::vector<double> planted_theta;
  std::vector<double> realized_theta;
  std::vector<bool> is_spammer;
};

PlantedFit fit_planted() {
  CampaignSpec spec;
  spec.num_files = 100;
  spec.vocab = LabelVocabulary({"l0", "l1", "l2", "l3", "l4"});
  spec.files_per_annotator = 25;  // 20 * 25 / 100 = 5 responses per item
  spec.seed = 90210;
  for (const std::string& id : sequential_ids("good", 15)) {
    AnnotatorSpec ann;
    ann.id = id;
    ann.competence = 0.9;
    spec.annotators.push_back(ann);
  }
  for (const std::string& id : sequential_ids("spam", 5)) {
    AnnotatorSpec ann;
    ann.id = id;
    ann.competence = 0.1;
    spec.annotators.push_back(ann);
  }

  PlantedFit fit{generate_campaign(spec), {}, {}, {}, {}};
  MaceConfig config;  // defaults: 10 restarts, 50 iterations
  config.seed = 20240824;
  fit.model = em_fit(fit.campaign.matrix, config);

  const std::vector<double> spam_fraction = realized_spam_fraction(fit.campaign);
  for (std::size_t j = 0; j < fit.model.annotator_ids.size(); ++j) {
    const bool spammer = fit.model.annotator_ids[j].rfind("spam", 0) == 0;
    fit.is_spammer.push_back(spammer);
    fit.planted_theta.push_back(spammer ? 0.1 : 0.9);
    fit.realized_theta.push_back(1.0 - spam_fraction[j]);
  }
  return fit;
}

void criterion_6(const PlantedFit& fit, double fit_ms) {
  double max_spam = 0.0, min_good = 1.0;
  for (std::size_t j = 0; j < fit.model.theta.size(); ++j) {
    if (fit.is_spammer[j]) {
      max_spam = std::max(max_spam, fit.model.theta[j]);
    } else {
      min_good = std::min(min_good, fit.model.theta[j]);
    }
  }
  const bool separated = max_spam < min_good;

  // Planted competence takes two values (15 x 0.9, 5 x 0.1), so tie-corrected
  // Spearman against it is bounded for ANY estimator: with distinct estimates
  // the rank dispersions are Sxx = 375 (tied plant) and Syy = 665, and the
  // covariance is maximized at 375 by perfect group separation, so
  // rho <= sqrt(375/665) ~= 0.7509. The realized competence (per-annotator
  // non-spam share, from the retained latent spam events) removes the ties
  // but adds binomial sampling noise the responses cannot reveal; measured
  // correlations sit at the same level. Both readings are reported.
  const double rho_realized = spearman(fit.realized_theta, fit.model.theta);
  const double rho_planted = spearman(fit.planted_theta, fit.model.theta);
  const double tie_cap = std::sqrt(375.0 / 665.0);

  const GroundTruthEstimate mace_est = predict(fit.model);
  const GroundTruthEstimate majority_est = majority_vote(fit.campaign.matrix);
  std::size_t mace_correct = 0, majority_correct = 0;
  for (std::size_t i = 0; i < fit.campaign.truth.size(); ++i) {
    mace_correct += mace_est.decisions[i] == fit.campaign.truth[i];
    majority_correct += majority_est.decisions[i] == fit.campaign.truth[i];
  }
  const double mace_acc = double(mace_correct) / double(fit.campaign.truth.size());
  const double majority_acc = double(majority_correct) / double(fit.campaign.truth.size());

  const bool pass = separated && rho_planted >= 0.8 && mace_acc >= majority_acc &&
                    fit_ms < 30000.0;
  std::ostringstream detail;
  detail << "max spam theta " << fmt(max_spam) << " < min good theta " << fmt(min_good)
         << ", spearman " << fmt(rho_planted) << " planted / " << fmt(rho_realized)
         << " realized (two-level ties cap the planted reading at " << fmt(tie_cap)
         << " for any estimator), accuracy " << fmt(mace_acc) << " vs majority "
         << fmt(majority_acc) << ", " << fmt(fit_ms) << "ms";
  report(6, "planted spammers are recovered", pass, detail.str());
}

void criterion_8(const PlantedFit& fit) {
  const AlphaReport unfiltered = nominal_alpha(fit.campaign.matrix);

  // Threshold just above the highest spammer estimate: drops all 5 spammers,
  // keeps every competent annotator the model ranked above them.
  double max_spam = 0.0;
  for (std::size_t j = 0; j < fit.model.theta.size(); ++j) {
    if (fit.is_spammer[j]) max_spam = std::max(max_spam, fit.model.theta[j]);
  }
  std::vector<std::string> keep;
  for (std::size_t j = 0; j < fit.model.theta.size(); ++j) {
    if (fit.model.theta[j] > max_spam) keep.push_back(fit.model.annotator_ids[j]);
  }
  const AnnotationMatrix filtered = fit.campaign.matrix.filter_annotators(keep);
  const AlphaReport after = nominal_alpha(filtered);

  bool pass = unfiltered.alpha.has_value() && after.alpha.has_value();
  std::size_t spammers_kept = 0;
  for (const std::string& id : keep) spammers_kept += id.rfind("spam", 0) == 0;
  pass = pass && spammers_kept == 0 && *after.alpha > *unfiltered.alpha;
  std::ostringstream detail;
  detail << "alpha " << (unfiltered.alpha ? fmt(*unfiltered.alpha) : "undefined") << " -> "
         << (after.alpha ? fmt(*after.alpha) : "undefined") << " keeping " << keep.size()
         << " annotators";
  report(8, "dropping estimated spammers raises agreement", pass, detail.str());
}

/* ---- criterion 7 ---- */

void criterion_7() {
  std::mt19937 gen(4711);
  bool pass = true;
  std::string problem;
  for (int trial = 0; trial < 50 && pass; ++trial) {
    const AnnotationMatrix m = from_rows(random_rows(gen, 20, 5, true));
    MaceConfig config;
    config.seed = std::uint64_t(trial);
    config.restarts = 4;
    const MaceModel model = em_fit(m, config);
    const GroundTruthEstimate u = union_vote(m);
    const GroundTruthEstimate maj = majority_vote(m);
    const GroundTruthEstimate mace_est = predict(model);
    const GroundTruthEstimate mace90 = threshold_at(mace_est, 90.0);
    for (std::size_t i = 0; i < m.num_items(); ++i) {
      if (maj.decisions[i] == 1 && u.decisions[i] != 1) {
        pass = false;
        problem = "majority positive outside union";
      }
      if (mace_est.decisions[i] == 1 && u.decisions[i] != 1) {
        pass = false;
        problem = "model positive outside union";
      }
      const bool kept_positive = mace90.decisions[i] == 1 && mace90.kept[i] == 1;
      if (kept_positive && mace_est.decisions[i] != 1) {
        pass = false;
        problem = "thresholded positive not a model positive";
      }
    }
  }
  report(7, "aggregation inclusion chain holds", pass,
         pass ? "50 random matrices" : problem);
}

/* ---- criterion 9 ---- */

int run_cli(const std::string& args) {
  const std::string command =
      std::string("\"") + ANNREL_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string normalize_manifest(std::string text) {
  // Wall-clock duration is the one legitimately nondeterministic field.
  static const std::regex duration("\"duration_ms\": [0-9]+");
  return std::regex_replace(text, duration, "\"duration_ms\": 0");
}

bool compare_runs(const fs::path& a, const fs::path& b, std::string& problem) {
  std::map<std::string, fs::path> files_a, files_b;
  for (const auto& entry : fs::directory_iterator(a)) {
    files_a[entry.path().filename().string()] = entry.path();
  }
  for (const auto& entry : fs::directory_iterator(b)) {
    files_b[entry.path().filename().string()] = entry.path();
  }
  if (files_a.size() != files_b.size()) {
    problem = "different artifact sets under " + a.string();
    return false;
  }
  for (const auto& [name, path] : files_a) {
    if (!files_b.count(name)) {
      problem = name + " missing from rerun";
      return false;
    }
    std::string left = read_file(path);
    std::string right = read_file(files_b[name]);
    if (name == "manifest.json") {
      left = normalize_manifest(left);
      right = normalize_manifest(right);
    }
    if (left != right) {
      problem = name + " differs between identical runs";
      return false;
    }
  }
  return true;
}

void criterion_9() {
  const fs::path root = fs::temp_directory_path() / "annrel_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  {
    std::ofstream raw(root / "raw.csv", std::ios::binary);
    raw << "file_id,annotator_id,labels\n"
           "f1,ann1,a;b\n"
           "f1,ann2,a\n"
           "f2,ann1,\n"
           "f2,ann2,b\n";
    std::ofstream vocab(root / "vocab.txt", std::ios::binary);
    vocab << "a\nb\n";
    std::ofstream competence(root / "competence.csv", std::ios::binary);
    competence << "annotator_id,theta\n";
    for (int j = 0; j < 8; ++j) competence << "ann" << j << ",0." << (1 + j) << "\n";
  }

  const fs::path sim = root / "sim";
  if (run_cli("--out " + sim.string() +
              " --seed 101 simulate --spammers-preset --annotators 8"
              " --files-per-annotator 6 --files 12 --labels 3") != 0) {
    report(9, "every CLI command is deterministic", false, "seed campaign failed");
    return;
  }
  const std::string input = (sim / "campaign.csv").string();

  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate_preset",
       "--seed 101 simulate --spammers-preset --annotators 8 --files-per-annotator 6"
       " --files 12 --labels 3"},
      {"simulate_spec", "simulate --spec " + (sim / "spec.json").string()},
      {"expand", "expand --campaign " + (root / "raw.csv").string() + " --vocab " +
                     (root / "vocab.txt").string()},
      {"alpha", "alpha --by-class --input " + input},
      {"alpha_sweep", "--format csv alpha --input " + input + " --competence " +
                          (root / "competence.csv").string() +
                          " --thresholds 0.0,0.25,0.5,0.75"},
      {"mace", "--seed 3 mace --restarts 3 --input " + input},
      {"aggregate_union", "aggregate --method union --input " + input},
      {"aggregate_mace", "--seed 4 aggregate --method mace@80 --restarts 2 --input " + input},
      {"filter_keep", "filter --keep ann0,ann2,ann5 --input " + input},
      {"filter_theta", "filter --competence " + (root / "competence.csv").string() +
                           " --min-theta 0.45 --input " + input},
      {"report", "--seed 5 report --restarts 2 --input " + input},
      {"report_truth", "--seed 5 report --restarts 2 --input " + input + " --truth " +
                           (sim / "truth.csv").string()},
  };

  bool pass = true;
  std::string problem;
  for (const auto& [name, args] : commands) {
    const fs::path dir_a = root / (name + "_a");
    const fs::path dir_b = root / (name + "_b");
    const int code_a = run_cli("--out " + dir_a.string() + " " + args);
    const int code_b = run_cli("--out " + dir_b.string() + " " + args);
    if (code_a != 0 || code_b != 0) {
      pass = false;
      problem = name + " exited " + std::to_string(code_a) + "/" + std::to_string(code_b);
      break;
    }
    if (!compare_runs(dir_a, dir_b, problem)) {
      pass = false;
      problem = name + ": " + problem;
      break;
    }
  }
  report(9, "every CLI command is deterministic", pass,
         pass ? std::to_string(commands.size()) + " command pairs byte-identical" : problem);
}

}  // namespace

int main() {
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();

    const auto start = Clock::now();
    const PlantedFit fit = fit_planted();
    const double fit_ms = ms_since(start);
    criterion_6(fit, fit_ms);
    criterion_7();
    criterion_8(fit);
    criterion_9();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] unexpected exception: " << e.what() << std::endl;
    ++g_failures;
  }

  if (g_failures == 0) {
    std::cout << "all acceptance criteria satisfied" << std::endl;
    return 0;
  }
  std::cout << g_failures << " criterion(s) failed" << std::endl;
  return 1;
}
