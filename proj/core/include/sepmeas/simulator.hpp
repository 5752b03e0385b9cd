#pragma once

// Seeded Monte Carlo of the discrimination experiment, the n-copy
// tensor-power measurement, and the product decomposition of I' - Pi used
// when a measurement acts on an enlarged local space.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sepmeas/cone.hpp"
#include "sepmeas/instance.hpp"
#include "sepmeas/numerics.hpp"
#include "sepmeas/usd.hpp"

namespace sepmeas {

inline constexpr std::size_t kDefaultElementBudget = 1'000'000;

struct SimConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t copies = 1;
};

struct OutcomeTally {
  std::string outcome;  // retained label as text, or "failure"
  std::size_t count = 0;
};

struct SimReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t copies = 1;
  std::vector<OutcomeTally> counts;  // retained labels ascending, then "failure"
  std::size_t misidentifications = 0;
  double empirical_failure = 0.0;
  double theoretical_failure = 0.0;
  double tv_distance = 0.0;  // empirical vs exact outcome distribution
};

/// Born-rule probabilities <state|E_k|state>; values within 1e-12 below zero
/// are clipped. Throws InputError if the elements do not sum to I within tol
/// or the state is not unit norm.
std::vector<double> outcome_distribution(std::span<const HermOp> elements, const CVector& state,
                                         double tol = kDefaultTol);

/// Single-copy experiment: a uniformly chosen Phi_k is measured with m.
/// Trials are drawn in fixed blocks, each from its own generator seeded by
/// (seed, block index), so the tallies depend only on the config. Throws
/// InputError on inconsistent inputs or copies != 1.
SimReport run_discrimination(const Instance& inst, const ReciprocalSet& r, const WeightedMeasurement& m,
                             const SimConfig& cfg);

/// Classical post-processing of an n-copy outcome tuple: the label shared by
/// every non-omitted entry, or nullopt (inconclusive) if all entries are the
/// omitted label or two different labels appear.
std::optional<int> identified_label(std::span<const int> tuple, int omit);

struct MultiCopyMeasurement {
  std::size_t copies = 1;
  int omit = 1;
  std::vector<std::vector<int>> tuples;  // lexicographic, copy 0 most significant
  std::vector<HermOp> elements;          // (D/N)^n Psi_{j_1} x ... x Psi_{j_n}
  double theoretical_failure = 1.0;      // exact trace evaluation on Phi_j^{x n}
  double closure_residual = 0.0;         // ||sum E - I||_F
  double max_error_probability = 0.0;    // largest misidentification probability
};

/// Throws InputError if N^n * D^(2n) exceeds `budget` complex entries, and
/// InvariantViolation if closure or the zero-error property fails.
MultiCopyMeasurement multicopy_measurement(const Instance& inst, std::size_t n,
                                           std::size_t budget = kDefaultElementBudget);

/// The n-copy measurement in factored form with each physical party holding
/// its share of all n copies: factor alpha of tuple (j_1..j_n) is
/// psi^(alpha)_{j_1} x ... x psi^(alpha)_{j_n}, with (D/N)^n folded into
/// party 0.
std::vector<ProductOperator> multicopy_factors(const Instance& inst, std::size_t n);

/// The same measurement factored over n * P parties (copy-major), i.e. with
/// every copy of every party treated as a separate site.
std::vector<ProductOperator> multicopy_factors_per_site(const Instance& inst, std::size_t n);

SimReport run_multicopy_discrimination(const Instance& inst, const ReciprocalSet& r,
                                       const MultiCopyMeasurement& m, const SimConfig& cfg);

struct ProductTerm {
  std::vector<HermOp> factors;
  HermOp full() const { return kron_all(factors); }
};

/// Telescoping product decomposition of I' - Pi, Pi = Pi_1 x ... x Pi_P
/// projecting each enlarged party space onto its first dims[alpha] levels.
/// Always returns P terms; term alpha is Pi_1 x .. x (I'_alpha - Pi_alpha) x I' x .. x I'.
std::vector<ProductTerm> complement_decomposition(std::span<const std::size_t> dims,
                                                  std::span<const std::size_t> enlarged_dims);

/// I' - Pi built directly, for comparison with the decomposition.
HermOp enlarged_complement(std::span<const std::size_t> dims, std::span<const std::size_t> enlarged_dims);

}  // namespace sepmeas
