#include "sepmeas/cone.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sepmeas/errors.hpp"

namespace sepmeas {

namespace {

constexpr double kNnlsDualTol = 1e-12;
constexpr double kRankTol = 1e-10;

bool is_rank_one(const HermOp& h) {
  const RealVec ev = herm_eigenvalues(h);
  const double top = ev(ev.size() - 1);
  if (top <= 0.0) return false;
  return (ev.array() > kRankTol * top).count() == 1;
}

ExtremalityCheck extremality_in(const RayGroups& rays, std::size_t cls, double tol) {
  ExtremalityCheck check;
  const std::size_t others = rays.representatives.size() - 1;
  if (others == 0) return check;

  const RealVec target = vec_herm(rays.representatives[cls]);
  RealMatrix a(target.size(), static_cast<Eigen::Index>(others));
  Eigen::Index col = 0;
  for (std::size_t c = 0; c < rays.representatives.size(); ++c) {
    if (c != cls) a.col(col++) = vec_herm(rays.representatives[c]);
  }
  const NnlsResult fit = nnls(a, target, kNnlsDualTol);
  check.relative_residual = fit.residual / target.norm();
  check.extreme = check.relative_residual > tol;
  check.borderline = check.extreme && check.relative_residual <= kConeWarnBand;
  return check;
}

}  // namespace

LocalOperatorSet::LocalOperatorSet(std::size_t party, std::vector<HermOp> ops, double psd_tol)
    : party_(party), ops_(std::move(ops)) {
  if (ops_.empty()) throw InputError("local operator set: no operators");
  for (const HermOp& k : ops_) {
    if (k.dim() != ops_.front().dim()) throw InputError("local operator set: mixed dimensions");
    if (min_eigenvalue(k) < -psd_tol * std::max(1.0, k.frobenius_norm())) {
      throw InputError("local operator set: operator is not positive semidefinite");
    }
  }
}

std::size_t RayGroups::class_of(std::size_t op_index) const {
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (std::find(groups[c].begin(), groups[c].end(), op_index) != groups[c].end()) return c;
  }
  throw InputError("ray groups: operator index " + std::to_string(op_index) + " not present");
}

RayGroups distinct_rays(const LocalOperatorSet& s, double tol) {
  if (!(tol > 0.0)) throw InputError("distinct_rays: tolerance must be positive");
  RayGroups rays;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double norm = s[i].frobenius_norm();
    if (norm == 0.0) throw InputError("distinct_rays: zero operator at index " + std::to_string(i));
    const HermOp unit = s[i] * (1.0 / norm);
    bool placed = false;
    for (std::size_t c = 0; c < rays.representatives.size() && !placed; ++c) {
      if ((unit.matrix() - rays.representatives[c].matrix()).norm() <= tol) {
        rays.groups[c].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      rays.groups.push_back({i});
      rays.representatives.push_back(unit);
    }
  }
  return rays;
}

ExtremalityCheck extremality(std::size_t i, const LocalOperatorSet& s, double tol) {
  if (i >= s.size()) throw InputError("extremality: operator index out of range");
  const RayGroups rays = distinct_rays(s);
  return extremality_in(rays, rays.class_of(i), tol);
}

bool is_extreme(std::size_t i, const LocalOperatorSet& s, double tol) { return extremality(i, s, tol).extreme; }

bool proportional_to_identity(const HermOp& k, double tol) {
  const double scale = k.trace() / static_cast<double>(k.dim());
  return (k - HermOp::identity(k.dim()) * scale).frobenius_norm() <= tol * k.frobenius_norm();
}

PartyCount analyze_party(const LocalOperatorSet& s, const ConeOptions& options) {
  PartyCount count;
  count.party = s.party();
  count.generators = s.size();
  const RayGroups rays = distinct_rays(s, options.ray_tol);
  count.rays = rays.representatives.size();
  for (std::size_t c = 0; c < rays.representatives.size(); ++c) {
    const bool rank_one = options.rank1_fast_path && is_rank_one(rays.representatives[c]);
    if (rank_one && !options.cross_check) {
      ++count.extreme;
      continue;
    }
    const ExtremalityCheck check = extremality_in(rays, c, options.residual_tol);
    if (rank_one && !check.extreme) {
      throw InvariantViolation("cone: rank-1 ray " + std::to_string(c) + " of party " +
                               std::to_string(s.party()) + " reported non-extreme by NNLS (residual " +
                               std::to_string(check.relative_residual) + ")");
    }
    if (check.extreme) ++count.extreme;
    if (check.borderline) ++count.borderline;
  }
  return count;
}

std::size_t count_extreme(const LocalOperatorSet& s, double tol) {
  ConeOptions options;
  options.residual_tol = tol;
  return analyze_party(s, options).extreme;
}

const char* to_string(Verdict v) { return v == Verdict::Violates ? "VIOLATES" : "SATISFIES"; }

ConeReport certify(std::span<const ProductOperator> ops, std::size_t n_ops, const ConeOptions& options) {
  if (ops.empty()) throw InputError("certify: empty measurement");
  if (ops.size() != n_ops) {
    throw InputError("certify: expected " + std::to_string(n_ops) + " product operators, got " +
                     std::to_string(ops.size()));
  }
  const std::size_t parties = ops.front().size();
  if (parties == 0) throw InputError("certify: product operators need at least one factor");
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (ops[j].size() != parties) {
      throw InputError("certify: operator " + std::to_string(j) + " is not factored over " +
                       std::to_string(parties) + " parties");
    }
    for (std::size_t a = 0; a < parties; ++a) {
      if (ops[j][a].dim() != ops.front()[a].dim()) {
        throw InputError("certify: factor dimension mismatch for party " + std::to_string(a) + " in operator " +
                         std::to_string(j));
      }
    }
  }

  ConeReport report;
  report.bound = 2 * (n_ops - 1);
  for (std::size_t a = 0; a < parties; ++a) {
    std::vector<HermOp> factors;
    bool all_identity = true;
    for (const ProductOperator& op : ops) {
      const bool identity_like = proportional_to_identity(op[a], options.ray_tol);
      all_identity = all_identity && identity_like;
      if (identity_like && !options.identity_generators) continue;
      factors.push_back(op[a]);
    }
    if (all_identity) {
      PartyCount skipped;
      skipped.party = a;
      skipped.generators = ops.size();
      skipped.skipped = true;
      report.parties.push_back(skipped);
      continue;
    }
    PartyCount count = analyze_party(LocalOperatorSet(a, std::move(factors)), options);
    count.generators = ops.size();
    if (count.borderline > 0) {
      report.warnings.push_back("party " + std::to_string(a) + ": " + std::to_string(count.borderline) +
                                " ray(s) with NNLS residual inside the warning band");
    }
    report.total += count.extreme;
    report.parties.push_back(count);
  }

  report.verdict = report.total > report.bound ? Verdict::Violates : Verdict::Satisfies;
  if (parties == 1) {
    report.verdict = Verdict::Satisfies;
    report.notes.push_back("single-party measurement: trivially implementable by LOCC");
  } else if (report.verdict == Verdict::Satisfies) {
    report.notes.push_back("bound satisfied: necessary condition only, LOCC implementability not established");
  } else {
    report.notes.push_back("bound violated: no finite-round LOCC protocol implements this measurement");
  }
  return report;
}

}  // namespace sepmeas
