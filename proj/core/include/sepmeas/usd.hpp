#pragma once

// Weighted unambiguous-discrimination measurements {w_j Psi_j} plus the
// failure operator, their failure probability under uniform priors, and the
// checks behind the optimality of w_j = D/N.

#include <cstdint>
#include <span>
#include <vector>

#include "sepmeas/instance.hpp"
#include "sepmeas/numerics.hpp"

namespace sepmeas {

inline constexpr double kPsdTol = 1e-10;

/// Weights are indexed like Instance::retained(): entry i belongs to the
/// i-th retained label.
class WeightedMeasurement {
 public:
  int n() const { return n_; }
  int omit() const { return omit_; }
  std::size_t dim() const { return failure_op_.dim(); }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<HermOp>& elements() const { return elements_; }
  const HermOp& failure_op() const { return failure_op_; }
  double psd_min_eigenvalue() const { return psd_min_eigenvalue_; }

  /// Identifying elements followed by the failure operator.
  std::vector<HermOp> povm() const;

 private:
  friend WeightedMeasurement build_measurement(const Instance&, std::span<const double>, double);
  WeightedMeasurement(HermOp failure) : failure_op_(std::move(failure)) {}

  int n_ = 0;
  int omit_ = 1;
  std::vector<int> labels_;
  std::vector<double> weights_;
  std::vector<HermOp> elements_;
  HermOp failure_op_;
  double psd_min_eigenvalue_ = 0.0;
};

/// Throws InputError on a wrong-length or negative weight vector and
/// NotPsdError when the failure operator has an eigenvalue below -psd_tol.
WeightedMeasurement build_measurement(const Instance& inst, std::span<const double> weights,
                                      double psd_tol = kPsdTol);

/// w_j = D/N for every retained label.
std::vector<double> optimal_weights(const Instance& inst);
WeightedMeasurement optimal_measurement(const Instance& inst);

struct UsdReport {
  double failure_probability = 1.0;        // 1 - (1/D) sum q_j w_j
  double closed_form_failure = 1.0;        // 1 - N/(2 D^2) sum w_j
  double trace_failure = 1.0;              // sum_j (1/D) Tr(Pi_f Phi_j)
  std::vector<double> per_state_success;   // q_j w_j
  std::vector<double> weights;
  std::vector<double> q_values;
  bool optimal = false;
  double psd_min_eigenvalue = 0.0;
};

/// Evaluates the three forms of Pr(f) and throws InvariantViolation if they
/// disagree by more than 1e-12. `priors`, when given, must be uniform 1/D;
/// anything else is rejected with InputError.
UsdReport failure_probability(const WeightedMeasurement& m, const ReciprocalSet& r,
                              std::span<const double> priors = {});

/// True iff w_k + w_l <= 2D/N + tol for every pair of distinct retained labels.
bool verify_pairwise_bound(const Instance& inst, std::span<const double> weights, double tol = kDefaultTol);

struct OracleOptions {
  std::size_t samples = 100000;  // PSD-feasible samples to collect
  std::uint64_t seed = 1;
  bool refine = false;           // local random search around the best sample
  bool include_exact = false;    // also evaluate w_j = D/N
  std::size_t max_attempts_per_sample = 1000;
};

struct OracleResult {
  std::vector<double> best_weights;
  double best_failure = 1.0;
  std::size_t feasible_samples = 0;
  std::size_t attempts = 0;
  double max_weight_sum = 0.0;           // over every feasible sample
  std::size_t pairwise_violations = 0;   // feasible samples breaking the pairwise bound
};

/// Uniform random search over [0, 2D/N]^D keeping PSD-feasible weights.
/// Pr(f) is evaluated from the full overlap matrix <Phi_j|Psi_k>, not from
/// the closed form.
OracleResult oracle_optimize(const Instance& inst, const OracleOptions& options);

struct QValues {
  std::vector<double> direct;        // |<Phi_k|Psi_k>|^2
  std::vector<double> via_omitted;   // |<Phi_k|Psi_omit>|^2
};

/// Throws InvariantViolation unless both evaluations agree and equal N/(2D)
/// within 1e-10.
QValues q_values(const Instance& inst, const ReciprocalSet& r);

}  // namespace sepmeas
