#include "sepmeas/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sepmeas/errors.hpp"

namespace sepmeas {

namespace {

constexpr std::size_t kTrialBlock = 4096;
constexpr double kClipTol = 1e-12;
constexpr double kMultiCopyTol = 1e-10;

// One row per true (retained) state, one column per measurement outcome slot.
// slot_labels maps a slot to the label it names, nullopt for failure.
SimReport sample_outcomes(const std::vector<std::vector<double>>& distributions,
                          const std::vector<std::optional<int>>& slot_labels, const std::vector<int>& labels,
                          const SimConfig& cfg) {
  if (cfg.trials < 1) throw InputError("simulation: trials must be >= 1");
  const std::size_t d = labels.size();
  const std::size_t outcomes = d + 1;  // labels, then failure

  auto outcome_index = [&](std::size_t slot) -> std::size_t {
    const auto& label = slot_labels[slot];
    if (!label) return d;
    return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), *label) - labels.begin());
  };

  std::vector<std::vector<double>> cumulative;
  std::vector<double> expected(outcomes, 0.0);
  double theoretical_failure = 0.0;
  for (const auto& p : distributions) {
    std::vector<double> c(p.size());
    std::partial_sum(p.begin(), p.end(), c.begin());
    cumulative.push_back(std::move(c));
    for (std::size_t s = 0; s < p.size(); ++s) {
      const std::size_t o = outcome_index(s);
      expected[o] += p[s] / static_cast<double>(d);
      if (o == d) theoretical_failure += p[s] / static_cast<double>(d);
    }
  }

  std::vector<std::size_t> tallies(outcomes, 0);
  std::size_t misidentified = 0;
  const auto seed_lo = static_cast<std::uint32_t>(cfg.seed & 0xffffffffu);
  const auto seed_hi = static_cast<std::uint32_t>(cfg.seed >> 32);
  for (std::size_t start = 0, block = 0; start < cfg.trials; start += kTrialBlock, ++block) {
    std::seed_seq seq{seed_lo, seed_hi, static_cast<std::uint32_t>(block)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick_state(0, d - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t stop = std::min(cfg.trials, start + kTrialBlock);
    for (std::size_t t = start; t < stop; ++t) {
      const std::size_t truth = pick_state(rng);
      const auto& c = cumulative[truth];
      const double u = unit(rng) * c.back();
      auto slot = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
      slot = std::min(slot, c.size() - 1);
      const std::size_t o = outcome_index(slot);
      ++tallies[o];
      if (o != d && o != truth) ++misidentified;
    }
  }

  SimReport report;
  report.seed = cfg.seed;
  report.trials = cfg.trials;
  report.copies = cfg.copies;
  for (std::size_t i = 0; i < d; ++i) report.counts.push_back({std::to_string(labels[i]), tallies[i]});
  report.counts.push_back({"failure", tallies[d]});
  report.misidentifications = misidentified;
  report.empirical_failure = static_cast<double>(tallies[d]) / static_cast<double>(cfg.trials);
  report.theoretical_failure = theoretical_failure;
  double tv = 0.0;
  for (std::size_t o = 0; o < outcomes; ++o) {
    tv += std::abs(static_cast<double>(tallies[o]) / static_cast<double>(cfg.trials) - expected[o]);
  }
  report.tv_distance = 0.5 * tv;
  return report;
}

HermOp level_projector(std::size_t kept, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(kept); ++i) p(i, i) = 1.0;
  return HermOp(p);
}

void check_enlargement(std::span<const std::size_t> dims, std::span<const std::size_t> enlarged) {
  if (dims.empty() || dims.size() != enlarged.size()) {
    throw InputError("complement decomposition: party count mismatch");
  }
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (dims[a] < 1 || enlarged[a] < dims[a]) {
      throw InputError("complement decomposition: enlarged dimension smaller than original for party " +
                       std::to_string(a));
    }
  }
}

std::vector<std::vector<int>> all_tuples(int n_labels, std::size_t copies) {
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(copies, 1);
  for (;;) {
    out.push_back(tuple);
    std::size_t pos = copies;
    while (pos > 0) {
      --pos;
      if (tuple[pos] < n_labels) {
        ++tuple[pos];
        break;
      }
      tuple[pos] = 1;
      if (pos == 0) return out;
    }
  }
}

}  // namespace

std::vector<double> outcome_distribution(std::span<const HermOp> elements, const CVector& state, double tol) {
  if (elements.empty()) throw InputError("outcome_distribution: no elements");
  const std::size_t dim = elements.front().dim();
  if (static_cast<std::size_t>(state.size()) != dim) throw InputError("outcome_distribution: state dimension mismatch");
  if (std::abs(state.norm() - 1.0) > tol) throw InputError("outcome_distribution: state is not unit norm");
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const HermOp& e : elements) {
    if (e.dim() != dim) throw InputError("outcome_distribution: element dimension mismatch");
    sum += e.matrix();
  }
  const double closure = (sum - CMatrix::Identity(sum.rows(), sum.cols())).norm();
  if (closure > tol) {
    throw InputError("outcome_distribution: elements do not sum to identity (residual " + std::to_string(closure) + ")");
  }
  std::vector<double> p;
  p.reserve(elements.size());
  for (const HermOp& e : elements) {
    const double v = expectation(e, state);
    if (v < -kClipTol) throw InputError("outcome_distribution: negative probability " + std::to_string(v));
    p.push_back(std::max(v, 0.0));
  }
  return p;
}

SimReport run_discrimination(const Instance& inst, const ReciprocalSet& r, const WeightedMeasurement& m,
                             const SimConfig& cfg) {
  if (cfg.copies != 1) throw InputError("run_discrimination: single-copy only; use run_multicopy_discrimination");
  if (!(m.n() == inst.n() && m.omit() == inst.omit() && m.dim() == inst.dim() && r.labels == m.labels())) {
    throw InputError("run_discrimination: instance, reciprocal set and measurement are inconsistent");
  }
  const std::vector<HermOp> povm = m.povm();
  std::vector<std::vector<double>> distributions;
  for (const CVector& phi : r.states) distributions.push_back(outcome_distribution(povm, phi));
  std::vector<std::optional<int>> slots(m.labels().begin(), m.labels().end());
  slots.push_back(std::nullopt);
  return sample_outcomes(distributions, slots, r.labels, cfg);
}

std::optional<int> identified_label(std::span<const int> tuple, int omit) {
  std::optional<int> named;
  for (int j : tuple) {
    if (j == omit) continue;
    if (named && *named != j) return std::nullopt;
    named = j;
  }
  return named;
}

MultiCopyMeasurement multicopy_measurement(const Instance& inst, std::size_t n, std::size_t budget) {
  if (n < 1) throw InputError("multicopy_measurement: copies must be >= 1");
  double entries = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    entries *= static_cast<double>(inst.n()) * static_cast<double>(inst.dim()) * static_cast<double>(inst.dim());
  }
  if (entries > static_cast<double>(budget)) {
    throw InputError("multicopy_measurement: " + std::to_string(n) + " copies need " +
                     std::to_string(static_cast<long long>(entries)) + " complex entries, budget is " +
                     std::to_string(budget));
  }

  MultiCopyMeasurement out;
  out.copies = n;
  out.omit = inst.omit();
  out.tuples = all_tuples(inst.n(), n);
  const double scale = std::pow(static_cast<double>(inst.dim()) / inst.n(), static_cast<double>(n));
  for (const auto& tuple : out.tuples) {
    std::vector<CVector> kets;
    for (int j : tuple) kets.push_back(inst.state(j));
    out.elements.push_back(HermOp::projector(kron_all(kets)) * scale);
  }

  const std::size_t big = out.elements.front().dim();
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(big), static_cast<Eigen::Index>(big));
  for (const HermOp& e : out.elements) sum += e.matrix();
  out.closure_residual = (sum - CMatrix::Identity(sum.rows(), sum.cols())).norm();
  if (out.closure_residual > kMultiCopyTol) {
    throw InvariantViolation("multicopy_measurement: closure residual " + std::to_string(out.closure_residual));
  }

  const ReciprocalSet r = reciprocal_set(inst);
  double failure = 0.0;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    const std::vector<CVector> copies(n, r.states[i]);
    const CVector input = kron_all(copies);
    for (std::size_t t = 0; t < out.tuples.size(); ++t) {
      const double p = expectation(out.elements[t], input);
      const auto named = identified_label(out.tuples[t], out.omit);
      if (!named) {
        failure += p;
      } else if (*named != r.labels[i]) {
        out.max_error_probability = std::max(out.max_error_probability, p);
      }
    }
  }
  out.theoretical_failure = failure / static_cast<double>(r.labels.size());
  if (out.max_error_probability > kMultiCopyTol) {
    throw InvariantViolation("multicopy_measurement: misidentification probability " +
                             std::to_string(out.max_error_probability));
  }
  return out;
}

std::vector<ProductOperator> multicopy_factors(const Instance& inst, std::size_t n) {
  if (n < 1) throw InputError("multicopy_factors: copies must be >= 1");
  const std::size_t parties = inst.party_dims().parties();
  const double scale = std::pow(static_cast<double>(inst.dim()) / inst.n(), static_cast<double>(n));
  std::vector<ProductOperator> out;
  for (const auto& tuple : all_tuples(inst.n(), n)) {
    ProductOperator op;
    for (std::size_t a = 0; a < parties; ++a) {
      std::vector<CVector> kets;
      for (int j : tuple) kets.push_back(inst.local_state(a, j));
      HermOp factor = HermOp::projector(kron_all(kets));
      op.push_back(a == 0 ? factor * scale : factor);
    }
    out.push_back(std::move(op));
  }
  return out;
}

std::vector<ProductOperator> multicopy_factors_per_site(const Instance& inst, std::size_t n) {
  if (n < 1) throw InputError("multicopy_factors_per_site: copies must be >= 1");
  const std::size_t parties = inst.party_dims().parties();
  const double scale = std::pow(static_cast<double>(inst.dim()) / inst.n(), static_cast<double>(n));
  std::vector<ProductOperator> out;
  for (const auto& tuple : all_tuples(inst.n(), n)) {
    ProductOperator op;
    for (int j : tuple) {
      for (std::size_t a = 0; a < parties; ++a) op.push_back(HermOp::projector(inst.local_state(a, j)));
    }
    op.front() = op.front() * scale;
    out.push_back(std::move(op));
  }
  return out;
}

SimReport run_multicopy_discrimination(const Instance& inst, const ReciprocalSet& r, const MultiCopyMeasurement& m,
                                       const SimConfig& cfg) {
  if (cfg.copies != m.copies) throw InputError("run_multicopy_discrimination: copy count mismatch");
  if (r.omit != inst.omit() || m.omit != inst.omit()) {
    throw InputError("run_multicopy_discrimination: inconsistent omitted label");
  }
  std::vector<std::vector<double>> distributions;
  for (const CVector& phi : r.states) {
    const std::vector<CVector> copies(m.copies, phi);
    distributions.push_back(outcome_distribution(m.elements, kron_all(copies)));
  }
  std::vector<std::optional<int>> slots;
  for (const auto& tuple : m.tuples) slots.push_back(identified_label(tuple, m.omit));
  return sample_outcomes(distributions, slots, r.labels, cfg);
}

std::vector<ProductTerm> complement_decomposition(std::span<const std::size_t> dims,
                                                  std::span<const std::size_t> enlarged_dims) {
  check_enlargement(dims, enlarged_dims);
  const std::size_t parties = dims.size();
  std::vector<ProductTerm> terms;
  for (std::size_t a = 0; a < parties; ++a) {
    ProductTerm term;
    for (std::size_t b = 0; b < parties; ++b) {
      const HermOp projector = level_projector(dims[b], enlarged_dims[b]);
      if (b < a) {
        term.factors.push_back(projector);
      } else if (b == a) {
        term.factors.push_back(HermOp::identity(enlarged_dims[b]) - projector);
      } else {
        term.factors.push_back(HermOp::identity(enlarged_dims[b]));
      }
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

HermOp enlarged_complement(std::span<const std::size_t> dims, std::span<const std::size_t> enlarged_dims) {
  check_enlargement(dims, enlarged_dims);
  std::vector<HermOp> projectors;
  std::size_t total = 1;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    projectors.push_back(level_projector(dims[a], enlarged_dims[a]));
    total *= enlarged_dims[a];
  }
  return HermOp::identity(total) - kron_all(projectors);
}

}  // namespace sepmeas
