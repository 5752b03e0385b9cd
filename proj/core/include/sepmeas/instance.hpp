#pragma once

// The symmetric family of N product states on a D = N - 1 dimensional
// multipartite space, its reciprocal states and the per-omission dual bases.
//
// Conventions: state labels j run over 1..N (they enter the phases), party
// indices are 0-based. Party 0 is the most significant factor of every
// Kronecker product.

#include <cstddef>
#include <span>
#include <vector>

#include "sepmeas/numerics.hpp"

namespace sepmeas {

bool is_prime(int n);

/// Prime factors of n in ascending order, with multiplicity.
std::vector<std::size_t> prime_factorization(std::size_t n);

/// Every ascending list of factors >= 2 whose product is n (including [n]).
std::vector<std::vector<std::size_t>> ascending_factorizations(std::size_t n);

class PartyDims {
 public:
  /// Throws InputError unless dims is non-empty, ascending and every entry >= 2.
  explicit PartyDims(std::vector<std::size_t> dims);

  std::size_t parties() const { return dims_.size(); }
  std::size_t total() const { return total_; }
  std::size_t operator[](std::size_t party) const { return dims_[party]; }
  std::span<const std::size_t> dims() const { return dims_; }
  /// p_alpha = d_0 ... d_{alpha-1}; offset of party 0 is 1.
  std::size_t offset(std::size_t party) const { return offsets_[party]; }

  bool operator==(const PartyDims&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 1;
};

class Instance {
 public:
  int n() const { return n_; }
  /// Hilbert space dimension D = N - 1.
  std::size_t dim() const { return party_dims_.total(); }
  const PartyDims& party_dims() const { return party_dims_; }
  int omit() const { return omit_; }

  /// Labels j != omit, ascending.
  std::vector<int> retained() const;

  const CVector& local_state(std::size_t party, int label) const;
  const CVector& state(int label) const;
  const HermOp& projector(int label) const;

  bool same_family(const Instance& other) const {
    return n_ == other.n_ && party_dims_ == other.party_dims_ && omit_ == other.omit_;
  }

 private:
  friend Instance make_instance(int n, std::vector<std::size_t> dims, int omit);
  Instance(int n, PartyDims dims, int omit) : n_(n), party_dims_(std::move(dims)), omit_(omit) {}

  std::size_t slot(int label) const;

  int n_;
  PartyDims party_dims_;
  int omit_;
  std::vector<std::vector<CVector>> local_states_;  // [party][label - 1]
  std::vector<CVector> states_;                      // [label - 1]
  std::vector<HermOp> projectors_;                   // [label - 1]
};

/// Builds the family with amplitudes exp(2 pi i j p_alpha m_alpha / N)/sqrt(d_alpha).
/// An empty dims list selects the full ascending prime factorization of N - 1.
/// Throws InputError for non-prime N, N < 5, bad dims or omit outside 1..N.
/// Throws InvariantViolation if the completeness identity fails.
Instance make_instance(int n, std::vector<std::size_t> dims = {}, int omit = 1);

/// ||(D/N) sum_j Psi_j - I||_F.
double completeness_residual(const Instance& inst);

/// Diagonal unitary of one party mapping psi_j to psi_{j+1} (cyclically).
CMatrix shift_unitary(const Instance& inst, std::size_t party);

/// Kronecker product of every party's shift unitary.
CMatrix full_shift_unitary(const Instance& inst);

struct IndependenceCheck {
  bool independent = false;
  double min_singular = 0.0;
};

/// Rank test (relative tolerance `tol`) of the column matrix of the chosen states.
IndependenceCheck check_linear_independence(const Instance& inst, std::span<const int> subset,
                                            double tol = kDefaultTol);

struct ReciprocalSet {
  int omit = 1;
  std::vector<int> labels;      // retained labels, ascending
  std::vector<CVector> states;  // Phi_j, unit norm, <Phi_j|Psi_j> real positive
  std::vector<double> overlaps; // q_j = |<Phi_j|Psi_j>|^2

  const CVector& state(int label) const;
  double q(int label) const;
};

/// Throws NumericalError if the retained basis has condition number > 1e8.
ReciprocalSet reciprocal_set(const Instance& inst);

struct DualBasisOmit {
  int omitted = 0;              // l
  std::vector<int> labels;      // every k != l, ascending
  std::vector<CVector> vectors; // xi_k with <xi_k|Psi_j> = delta_jk for j, k != l

  const CVector& vector(int label) const;
};

/// Dual basis of the N - 1 states left after removing Psi_l. Throws
/// InputError when l is the instance's omitted label or out of range.
DualBasisOmit dual_basis_omit(const Instance& inst, int l);

/// Gram matrix G(j-1, k-1) = <Psi_j|Psi_k>.
CMatrix pairwise_overlaps(const Instance& inst);

}  // namespace sepmeas
