#include "sepmeas/usd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "sepmeas/errors.hpp"

namespace sepmeas {

namespace {

constexpr double kReportTol = 1e-12;
constexpr double kQTol = 1e-10;

double pairwise_cap(const Instance& inst) { return 2.0 * static_cast<double>(inst.dim()) / inst.n(); }

// |<Phi_j|Psi_k>|^2 for retained j (rows) and retained k (columns).
RealMatrix overlap_weights(const Instance& inst, const ReciprocalSet& r) {
  const auto d = static_cast<Eigen::Index>(r.labels.size());
  RealMatrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      out(j, k) = std::norm(r.states[static_cast<std::size_t>(j)].dot(inst.state(r.labels[static_cast<std::size_t>(k)])));
    }
  }
  return out;
}

}  // namespace

std::vector<HermOp> WeightedMeasurement::povm() const {
  std::vector<HermOp> out = elements_;
  out.push_back(failure_op_);
  return out;
}

WeightedMeasurement build_measurement(const Instance& inst, std::span<const double> weights, double psd_tol) {
  const std::vector<int> labels = inst.retained();
  if (weights.size() != labels.size()) {
    throw InputError("build_measurement: expected " + std::to_string(labels.size()) + " weights, got " +
                     std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("build_measurement: weights must be finite and >= 0");
  }

  HermOp failure = HermOp::identity(inst.dim());
  std::vector<HermOp> elements;
  elements.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    elements.push_back(inst.projector(labels[i]) * weights[i]);
    failure = failure - elements.back();
  }
  const double lowest = min_eigenvalue(failure);
  if (lowest < -psd_tol) {
    throw NotPsdError("build_measurement: failure operator not positive semidefinite (min eigenvalue " +
                          std::to_string(lowest) + ")",
                      lowest);
  }

  WeightedMeasurement m(std::move(failure));
  m.n_ = inst.n();
  m.omit_ = inst.omit();
  m.labels_ = labels;
  m.weights_.assign(weights.begin(), weights.end());
  m.elements_ = std::move(elements);
  m.psd_min_eigenvalue_ = lowest;
  return m;
}

std::vector<double> optimal_weights(const Instance& inst) {
  return std::vector<double>(inst.dim(), static_cast<double>(inst.dim()) / inst.n());
}

WeightedMeasurement optimal_measurement(const Instance& inst) {
  return build_measurement(inst, optimal_weights(inst));
}

UsdReport failure_probability(const WeightedMeasurement& m, const ReciprocalSet& r, std::span<const double> priors) {
  if (m.labels() != r.labels || m.omit() != r.omit ||
      (!r.states.empty() && static_cast<std::size_t>(r.states.front().size()) != m.dim())) {
    throw InputError("failure_probability: measurement and reciprocal set belong to different instances");
  }
  const auto d = static_cast<double>(m.dim());
  if (!priors.empty()) {
    if (priors.size() != m.labels().size()) throw InputError("failure_probability: prior count mismatch");
    for (double eta : priors) {
      if (std::abs(eta - 1.0 / d) > kReportTol) {
        throw InputError("failure_probability: only uniform priors 1/D are supported");
      }
    }
  }

  UsdReport report;
  report.weights = m.weights();
  report.q_values = r.overlaps;
  report.psd_min_eigenvalue = m.psd_min_eigenvalue();

  double weighted = 0.0;
  double weight_sum = 0.0;
  double trace_sum = 0.0;
  for (std::size_t i = 0; i < m.labels().size(); ++i) {
    const double w = m.weights()[i];
    report.per_state_success.push_back(r.overlaps[i] * w);
    weighted += r.overlaps[i] * w;
    weight_sum += w;
    trace_sum += expectation(m.failure_op(), r.states[i]);
  }
  report.failure_probability = 1.0 - weighted / d;
  report.closed_form_failure = 1.0 - m.n() / (2.0 * d * d) * weight_sum;
  report.trace_failure = trace_sum / d;

  const double spread = std::max({report.failure_probability, report.closed_form_failure, report.trace_failure}) -
                        std::min({report.failure_probability, report.closed_form_failure, report.trace_failure});
  if (spread > kReportTol) {
    throw InvariantViolation("failure_probability: evaluations disagree by " + std::to_string(spread));
  }
  const double target = d / m.n();
  report.optimal = std::all_of(m.weights().begin(), m.weights().end(),
                               [&](double w) { return std::abs(w - target) <= kReportTol; });
  return report;
}

bool verify_pairwise_bound(const Instance& inst, std::span<const double> weights, double tol) {
  if (weights.size() != inst.dim()) throw InputError("verify_pairwise_bound: weight count mismatch");
  const double cap = pairwise_cap(inst) + tol;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t l = k + 1; l < weights.size(); ++l) {
      if (weights[k] + weights[l] > cap) return false;
    }
  }
  return true;
}

OracleResult oracle_optimize(const Instance& inst, const OracleOptions& options) {
  if (options.samples < 1) throw InputError("oracle_optimize: samples must be >= 1");
  const ReciprocalSet r = reciprocal_set(inst);
  const RealMatrix overlaps = overlap_weights(inst, r);
  const std::vector<int> labels = inst.retained();
  const std::size_t d = labels.size();
  const double cap = pairwise_cap(inst);

  std::vector<CMatrix> projectors;
  for (int label : labels) projectors.push_back(inst.projector(label).matrix());
  const auto dim = static_cast<Eigen::Index>(inst.dim());

  auto feasible = [&](const RealVec& w) {
    CMatrix failure = CMatrix::Identity(dim, dim);
    for (std::size_t i = 0; i < d; ++i) failure -= w(static_cast<Eigen::Index>(i)) * projectors[i];
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(failure, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0) >= -kPsdTol;
  };
  auto failure_of = [&](const RealVec& w) { return 1.0 - (overlaps * w).sum() / static_cast<double>(d); };

  OracleResult result;
  RealVec best = RealVec::Zero(static_cast<Eigen::Index>(d));
  result.best_failure = failure_of(best);
  auto consider = [&](const RealVec& w) {
    ++result.feasible_samples;
    result.max_weight_sum = std::max(result.max_weight_sum, w.sum());
    std::vector<double> as_vec(w.data(), w.data() + w.size());
    if (!verify_pairwise_bound(inst, as_vec)) ++result.pairwise_violations;
    const double f = failure_of(w);
    if (f < result.best_failure) {
      result.best_failure = f;
      best = w;
    }
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coord(0.0, cap);
  const std::size_t max_attempts = options.samples * options.max_attempts_per_sample;
  RealVec w(static_cast<Eigen::Index>(d));
  while (result.feasible_samples < options.samples && result.attempts < max_attempts) {
    ++result.attempts;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = coord(rng);
    if (feasible(w)) consider(w);
  }

  if (options.include_exact) {
    const std::vector<double> exact = optimal_weights(inst);
    const RealVec we = Eigen::Map<const RealVec>(exact.data(), static_cast<Eigen::Index>(exact.size()));
    if (feasible(we)) consider(we);
  }

  if (options.refine) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double step = 0.05 * cap;
    int misses = 0;
    for (int iter = 0; iter < 20000 && step > 1e-9; ++iter) {
      RealVec candidate = best;
      for (Eigen::Index i = 0; i < candidate.size(); ++i) {
        candidate(i) = std::clamp(candidate(i) + step * gauss(rng), 0.0, cap);
      }
      if (feasible(candidate) && failure_of(candidate) < result.best_failure) {
        consider(candidate);
        misses = 0;
      } else if (++misses >= 60) {
        step *= 0.5;
        misses = 0;
      }
    }
  }

  result.best_weights.assign(best.data(), best.data() + best.size());
  return result;
}

QValues q_values(const Instance& inst, const ReciprocalSet& r) {
  const double expected = inst.n() / (2.0 * static_cast<double>(inst.dim()));
  const CVector& omitted = inst.state(inst.omit());
  QValues out;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    const double direct = std::norm(r.states[i].dot(inst.state(r.labels[i])));
    const double via = std::norm(r.states[i].dot(omitted));
    if (std::abs(direct - via) > kQTol || std::abs(direct - expected) > kQTol) {
      throw InvariantViolation("q_values: label " + std::to_string(r.labels[i]) + " gives " +
                               std::to_string(direct) + " and " + std::to_string(via) + ", expected " +
                               std::to_string(expected));
    }
    out.direct.push_back(direct);
    out.via_omitted.push_back(via);
  }
  return out;
}

}  // namespace sepmeas
