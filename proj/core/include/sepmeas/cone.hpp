#pragma once

// Extreme-ray counting for the polyhedral cones spanned by each party's
// local measurement factors, and the finite-round LOCC bound
// sum_alpha e_alpha <= 2(N - 1) evaluated on a factored product measurement.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sepmeas/numerics.hpp"

namespace sepmeas {

inline constexpr double kRayTol = 1e-8;
inline constexpr double kConeResidualTol = 1e-8;
inline constexpr double kConeWarnBand = 1e-6;

/// One factor per party. Every factor must be PSD.
using ProductOperator = std::vector<HermOp>;

class LocalOperatorSet {
 public:
  /// Throws InputError for an empty list, mixed dimensions or a factor with
  /// an eigenvalue below -psd_tol * max(1, ||K||_F).
  LocalOperatorSet(std::size_t party, std::vector<HermOp> ops, double psd_tol = kDefaultTol);

  std::size_t party() const { return party_; }
  std::size_t size() const { return ops_.size(); }
  std::size_t dim() const { return ops_.front().dim(); }
  const std::vector<HermOp>& ops() const { return ops_; }
  const HermOp& operator[](std::size_t i) const { return ops_[i]; }

 private:
  std::size_t party_;
  std::vector<HermOp> ops_;
};

struct RayGroups {
  std::vector<std::vector<std::size_t>> groups;  // op indices, ascending, one list per ray
  std::vector<HermOp> representatives;           // Frobenius-normalized, one per group

  std::size_t class_of(std::size_t op_index) const;
};

/// Groups operators equal up to a positive scale. Throws InputError on a
/// zero operator.
RayGroups distinct_rays(const LocalOperatorSet& s, double tol = kRayTol);

struct ExtremalityCheck {
  bool extreme = true;
  double relative_residual = 1.0;  // NNLS residual against the other rays; 1 when there are none
  bool borderline = false;         // residual inside (tol, kConeWarnBand]
};

/// NNLS test of whether the ray of op i is a nonnegative combination of the
/// other rays of the cone.
ExtremalityCheck extremality(std::size_t i, const LocalOperatorSet& s, double tol = kConeResidualTol);
bool is_extreme(std::size_t i, const LocalOperatorSet& s, double tol = kConeResidualTol);

struct ConeOptions {
  double ray_tol = kRayTol;
  double residual_tol = kConeResidualTol;
  /// A rank-1 ray is extreme in any cone of PSD operators; skip NNLS for it.
  bool rank1_fast_path = true;
  /// Run NNLS on rank-1 rays too and throw InvariantViolation on disagreement.
  bool cross_check = false;
  /// Whether identity-proportional factors of a counted party still act as
  /// generators of that party's cone.
  bool identity_generators = true;
};

struct PartyCount {
  std::size_t party = 0;
  std::size_t generators = 0;
  std::size_t rays = 0;
  std::size_t extreme = 0;
  bool skipped = false;
  std::size_t borderline = 0;
};

PartyCount analyze_party(const LocalOperatorSet& s, const ConeOptions& options = {});
std::size_t count_extreme(const LocalOperatorSet& s, double tol = kConeResidualTol);

/// ||K - (Tr K / d) I||_F <= tol * ||K||_F.
bool proportional_to_identity(const HermOp& k, double tol = kRayTol);

enum class Verdict { Violates, Satisfies };

const char* to_string(Verdict v);

struct ConeReport {
  std::vector<PartyCount> parties;
  std::size_t total = 0;  // sum of e_alpha over counted parties
  std::size_t bound = 0;  // 2(N - 1)
  Verdict verdict = Verdict::Satisfies;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

/// Evaluates the finite-round LOCC necessary condition on a measurement given
/// as N product operators. Violates means no finite-round LOCC protocol can
/// implement the measurement; Satisfies is inconclusive. Throws InputError
/// when n_ops does not match, factor counts differ or a party's factors
/// disagree in dimension.
ConeReport certify(std::span<const ProductOperator> ops, std::size_t n_ops, const ConeOptions& options = {});

}  // namespace sepmeas
