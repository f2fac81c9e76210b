#include "core/mace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace annrel {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogHalf = -std::numbers::ln2;

double logsumexp2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

struct Params {
  std::vector<double> theta;
  std::vector<std::array<double, 2>> xi;
};

/// One E-step pass: data log-likelihood, truth posteriors, and the per-cell
/// and per-annotator spam responsibilities the M-step needs.
struct EStep {
  double ll = 0.0;
  std::vector<double> posterior_positive;
  std::vector<std::vector<double>> expected_spam;
  std::vector<double> spam_total;              // sum of r_ij per annotator
  std::vector<std::array<double, 2>> spam_by_value;
};

EStep e_step(const AnnotationMatrix& matrix, const Params& params) {
  const std::size_t M = matrix.num_annotators();
  const std::size_t N = matrix.num_items();

  // Per annotator, only four response probabilities exist; precompute them
  // once per pass so the per-cell loop does table lookups, not log calls.
  std::vector<std::array<std::array<double, 2>, 2>> prob(M);   // [a][t]
  std::vector<std::array<std::array<double, 2>, 2>> logp(M);
  std::vector<std::array<double, 2>> spam_part(M);             // (1-theta)*xi[a]
  for (std::size_t j = 0; j < M; ++j) {
    for (int a = 0; a < 2; ++a) {
      spam_part[j][a] = (1.0 - params.theta[j]) * params.xi[j][a];
      for (int t = 0; t < 2; ++t) {
        const double p = observation_likelihood(params.theta[j], params.xi[j], a, t);
        prob[j][a][t] = p;
        logp[j][a][t] = std::log(p);
      }
    }
  }

  EStep out;
  out.posterior_positive.resize(N);
  out.expected_spam.resize(N);
  out.spam_total.assign(M, 0.0);
  out.spam_by_value.assign(M, {0.0, 0.0});

  for (std::size_t i = 0; i < N; ++i) {
    const auto row = matrix.responses(i);
    double l0 = 0.0;
    double l1 = 0.0;
    for (const auto& resp : row) {
      l0 += logp[resp.annotator][resp.value][0];
      l1 += logp[resp.annotator][resp.value][1];
    }
    const double lse = logsumexp2(l0, l1);
    double w0 = 0.5;
    double w1 = 0.5;
    if (lse != kNegInf) {
      out.ll += kLogHalf + lse;
      w0 = std::exp(l0 - lse);
      w1 = std::exp(l1 - lse);
    } else {
      out.ll += kNegInf;
    }
    out.posterior_positive[i] = w1;

    auto& row_spam = out.expected_spam[i];
    row_spam.resize(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& resp = row[k];
      const std::size_t j = resp.annotator;
      const int a = resp.value;
      const double sp = spam_part[j][a];
      double r = 0.0;
      if (w0 > 0.0 && prob[j][a][0] > 0.0) r += w0 * sp / prob[j][a][0];
      if (w1 > 0.0 && prob[j][a][1] > 0.0) r += w1 * sp / prob[j][a][1];
      row_spam[k] = r;
      out.spam_total[j] += r;
      out.spam_by_value[j][a] += r;
    }
  }
  return out;
}

void m_step(const EStep& stats, const std::vector<std::size_t>& responses, double delta,
            Params& params) {
  const std::size_t M = params.theta.size();
  for (std::size_t j = 0; j < M; ++j) {
    const double n_j = double(responses[j]);
    const double spam = stats.spam_total[j];
    const double theta_den = n_j + 2.0 * delta;
    params.theta[j] = theta_den > 0.0 ? 1.0 - (spam + delta) / theta_den : 0.5;
    const double xi_den = spam + 2.0 * delta;
    if (xi_den > 0.0) {
      const double x0 = (stats.spam_by_value[j][0] + delta) / xi_den;
      const double x1 = (stats.spam_by_value[j][1] + delta) / xi_den;
      const double sum = x0 + x1;
      params.xi[j] = {x0 / sum, x1 / sum};
    } else {
      params.xi[j] = {0.5, 0.5};
    }
  }
}

/// Smoothing penalty whose sum with the data log-likelihood is the quantity
/// EM maximizes; zero when smoothing is off.
double smoothing_penalty(const Params& params, double delta) {
  if (delta <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < params.theta.size(); ++j) {
    acc += std::log(params.theta[j]) + std::log(1.0 - params.theta[j]) +
           std::log(params.xi[j][0]) + std::log(params.xi[j][1]);
  }
  return delta * acc;
}

Params random_init(std::size_t num_annotators, std::mt19937_64& eng) {
  Params params;
  params.theta.resize(num_annotators);
  params.xi.resize(num_annotators);
  for (std::size_t j = 0; j < num_annotators; ++j) {
    params.theta[j] = uniform_range(eng, 0.4, 0.9);
    const double u0 = uniform_range(eng, 0.5, 1.5);
    const double u1 = uniform_range(eng, 0.5, 1.5);
    params.xi[j] = {u0 / (u0 + u1), u1 / (u0 + u1)};
  }
  return params;
}

struct RunResult {
  Params params;
  EStep final_state;
  RestartSummary summary;
};

RunResult run_em(const AnnotationMatrix& matrix, const MaceConfig& config,
                 const std::vector<std::size_t>& responses, std::size_t restart) {
  auto eng = make_engine(config.seed, restart);
  RunResult run;
  run.summary.restart = restart;
  run.params = random_init(matrix.num_annotators(), eng);
  run.final_state = e_step(matrix, run.params);
  double prev_objective = run.final_state.ll + smoothing_penalty(run.params, config.smoothing_delta);

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    m_step(run.final_state, responses, config.smoothing_delta, run.params);
    run.final_state = e_step(matrix, run.params);
    const double objective =
        run.final_state.ll + smoothing_penalty(run.params, config.smoothing_delta);
    run.summary.log_likelihood_trace.push_back(run.final_state.ll);
    run.summary.objective_trace.push_back(objective);
    const bool converged =
        std::abs(objective - prev_objective) <= config.tolerance * (std::abs(prev_objective) + 1.0);
    prev_objective = objective;
    if (converged) break;
  }
  run.summary.iterations = run.summary.log_likelihood_trace.size();
  run.summary.final_log_likelihood = run.final_state.ll;
  run.summary.final_objective = prev_objective;
  return run;
}

}  // namespace

void MaceConfig::validate() const {
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(smoothing_delta >= 0.0)) throw InvalidArgument("smoothing_delta must be non-negative");
}

double observation_likelihood(double theta, const std::array<double, 2>& xi, int a, int t) {
  const double spam = (1.0 - theta) * xi[std::size_t(a)];
  return a == t ? theta + spam : spam;
}

double log_likelihood(const AnnotationMatrix& matrix,
                      const std::vector<double>& theta,
                      const std::vector<std::array<double, 2>>& xi) {
  if (theta.size() != matrix.num_annotators() || xi.size() != matrix.num_annotators()) {
    throw InvalidArgument("parameter vectors must match the annotator count");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto row = matrix.responses(i);
    if (row.empty()) continue;
    double l0 = 0.0;
    double l1 = 0.0;
    for (const auto& resp : row) {
      l0 += std::log(observation_likelihood(theta[resp.annotator], xi[resp.annotator],
                                            resp.value, 0));
      l1 += std::log(observation_likelihood(theta[resp.annotator], xi[resp.annotator],
                                            resp.value, 1));
    }
    total += kLogHalf + logsumexp2(l0, l1);
  }
  return total;
}

MaceModel em_fit(const AnnotationMatrix& matrix, const MaceConfig& config) {
  config.validate();
  if (matrix.num_cells() == 0) {
    throw NumericError("cannot fit a model on a matrix with no stored cells");
  }
  const std::vector<std::size_t> responses = matrix.responses_per_annotator();

  MaceModel model;
  model.annotator_ids = matrix.annotators();
  model.items = matrix.items();
  model.vocab = matrix.vocab();
  model.config = config;
  model.restarts.reserve(config.restarts);

  RunResult best;
  bool have_best = false;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    RunResult run = run_em(matrix, config, responses, r);
    model.restarts.push_back(run.summary);
    if (!have_best || run.summary.final_log_likelihood > best.summary.final_log_likelihood) {
      best = std::move(run);
      have_best = true;
    }
  }

  model.theta = std::move(best.params.theta);
  model.xi = std::move(best.params.xi);
  model.posterior_positive = std::move(best.final_state.posterior_positive);
  model.expected_spam = std::move(best.final_state.expected_spam);
  model.log_likelihood = best.summary.final_log_likelihood;
  model.iterations_used = best.summary.iterations;
  model.best_restart = best.summary.restart;
  return model;
}

GroundTruthEstimate predict(const MaceModel& model) {
  GroundTruthEstimate est;
  est.items = model.items;
  est.vocab = model.vocab;
  est.method = "mace";
  const std::size_t N = model.items.size();
  est.decisions.resize(N);
  est.confidence.resize(N);
  est.kept.assign(N, 1);
  for (std::size_t i = 0; i < N; ++i) {
    const double p = model.posterior_positive[i];
    est.decisions[i] = p > 0.5 ? 1 : 0;
    est.confidence[i] = p > 0.5 ? p : 1.0 - p;
  }
  return est;
}

GroundTruthEstimate threshold_at(const GroundTruthEstimate& estimate, double keep_percent) {
  if (!(keep_percent > 0.0 && keep_percent <= 100.0)) {
    throw InvalidArgument("keep_percent must lie in (0, 100]");
  }
  const std::size_t N = estimate.size();
  std::size_t kept = std::size_t(std::ceil(keep_percent * double(N) / 100.0));
  if (kept > N) kept = N;

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return estimate.confidence[a] > estimate.confidence[b];
  });

  GroundTruthEstimate out = estimate;
  out.method = estimate.method + "@" + format_double(keep_percent);
  std::fill(out.kept.begin(), out.kept.end(), std::uint8_t(0));
  for (std::size_t k = 0; k < kept; ++k) out.kept[order[k]] = 1;
  return out;
}

}  // namespace annrel
