#include "sepmeas/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sepmeas/errors.hpp"

namespace sepmeas {

namespace {

constexpr double kCompletenessTol = 1e-12;
constexpr double kMaxCondition = 1e8;

Complex root_of_unity(long long numerator, int n) {
  const long long r = ((numerator % n) + n) % n;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
}

void collect_factorizations(std::size_t n, std::size_t min_factor, std::vector<std::size_t>& prefix,
                            std::vector<std::vector<std::size_t>>& out) {
  if (n == 1) {
    if (!prefix.empty()) out.push_back(prefix);
    return;
  }
  for (std::size_t f = min_factor; f <= n; ++f) {
    if (n % f != 0) continue;
    prefix.push_back(f);
    collect_factorizations(n / f, f, prefix, out);
    prefix.pop_back();
  }
}

// Conjugated rows of the inverse of the column matrix of `labels`:
// <out_k | Psi_j> = delta_jk for j, k in labels.
std::vector<CVector> dual_vectors(const Instance& inst, const std::vector<int>& labels) {
  const auto d = static_cast<Eigen::Index>(inst.dim());
  CMatrix basis(d, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t c = 0; c < labels.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = inst.state(labels[c]);

  const RealVec s = singular_values(basis);
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  if (cond > kMaxCondition) {
    throw NumericalError("dual basis: ill-conditioned state matrix (condition number " +
                         std::to_string(cond) + ")");
  }
  const CMatrix inverse = basis.partialPivLu().inverse();
  std::vector<CVector> out;
  out.reserve(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) out.emplace_back(inverse.row(static_cast<Eigen::Index>(r)).adjoint());
  return out;
}

std::size_t find_label(const std::vector<int>& labels, int label, const char* what) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw InputError(std::string(what) + ": label " + std::to_string(label) + " not present");
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; static_cast<long long>(f) * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

std::vector<std::size_t> prime_factorization(std::size_t n) {
  std::vector<std::size_t> factors;
  for (std::size_t f = 2; f * f <= n; ++f) {
    while (n % f == 0) {
      factors.push_back(f);
      n /= f;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

std::vector<std::vector<std::size_t>> ascending_factorizations(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  if (n >= 2) collect_factorizations(n, 2, prefix, out);
  return out;
}

PartyDims::PartyDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("party dims: at least one party required");
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (dims_[a] < 2) throw InputError("party dims: every party dimension must be >= 2");
    if (a > 0 && dims_[a] < dims_[a - 1]) throw InputError("party dims: dimensions must be ascending");
  }
  offsets_.reserve(dims_.size());
  for (std::size_t d : dims_) {
    offsets_.push_back(total_);
    total_ *= d;
  }
}

std::vector<int> Instance::retained() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n_ - 1));
  for (int j = 1; j <= n_; ++j)
    if (j != omit_) out.push_back(j);
  return out;
}

std::size_t Instance::slot(int label) const {
  if (label < 1 || label > n_) {
    throw InputError("state label " + std::to_string(label) + " outside 1.." + std::to_string(n_));
  }
  return static_cast<std::size_t>(label - 1);
}

const CVector& Instance::local_state(std::size_t party, int label) const {
  if (party >= party_dims_.parties()) throw InputError("party index out of range");
  return local_states_[party][slot(label)];
}

const CVector& Instance::state(int label) const { return states_[slot(label)]; }

const HermOp& Instance::projector(int label) const { return projectors_[slot(label)]; }

Instance make_instance(int n, std::vector<std::size_t> dims, int omit) {
  if (n < 5) throw InputError("N must be at least 5, got " + std::to_string(n));
  if (!is_prime(n)) throw InputError("N must be prime, got " + std::to_string(n));
  if (dims.empty()) dims = prime_factorization(static_cast<std::size_t>(n - 1));
  PartyDims party_dims(std::move(dims));
  if (party_dims.total() != static_cast<std::size_t>(n - 1)) {
    throw InputError("product of party dimensions (" + std::to_string(party_dims.total()) +
                     ") must equal N - 1 = " + std::to_string(n - 1));
  }
  if (omit < 1 || omit > n) throw InputError("omitted label must lie in 1.." + std::to_string(n));

  Instance inst(n, std::move(party_dims), omit);
  const PartyDims& pd = inst.party_dims_;
  inst.local_states_.resize(pd.parties());
  for (std::size_t a = 0; a < pd.parties(); ++a) {
    const auto d = static_cast<Eigen::Index>(pd[a]);
    const double amp = 1.0 / std::sqrt(static_cast<double>(pd[a]));
    for (int j = 1; j <= n; ++j) {
      CVector psi(d);
      for (Eigen::Index m = 0; m < d; ++m) {
        psi(m) = amp * root_of_unity(static_cast<long long>(j) * static_cast<long long>(pd.offset(a)) * m, n);
      }
      inst.local_states_[a].push_back(std::move(psi));
    }
  }
  for (int j = 1; j <= n; ++j) {
    std::vector<CVector> factors;
    for (std::size_t a = 0; a < pd.parties(); ++a) factors.push_back(inst.local_states_[a][static_cast<std::size_t>(j - 1)]);
    inst.states_.push_back(kron_all(factors));
    inst.projectors_.push_back(HermOp::projector(inst.states_.back()));
  }

  const double residual = completeness_residual(inst);
  if (residual > kCompletenessTol) {
    throw InvariantViolation("completeness identity fails: residual " + std::to_string(residual));
  }
  return inst;
}

double completeness_residual(const Instance& inst) {
  const auto d = static_cast<Eigen::Index>(inst.dim());
  CMatrix sum = CMatrix::Zero(d, d);
  for (int j = 1; j <= inst.n(); ++j) sum += inst.projector(j).matrix();
  sum *= static_cast<double>(inst.dim()) / inst.n();
  return (sum - CMatrix::Identity(d, d)).norm();
}

CMatrix shift_unitary(const Instance& inst, std::size_t party) {
  const PartyDims& pd = inst.party_dims();
  if (party >= pd.parties()) throw InputError("shift_unitary: party index out of range");
  const auto d = static_cast<Eigen::Index>(pd[party]);
  CMatrix u = CMatrix::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    u(m, m) = root_of_unity(static_cast<long long>(pd.offset(party)) * m, inst.n());
  }
  return u;
}

CMatrix full_shift_unitary(const Instance& inst) {
  CMatrix u = shift_unitary(inst, 0);
  for (std::size_t a = 1; a < inst.party_dims().parties(); ++a) u = kron(u, shift_unitary(inst, a));
  return u;
}

IndependenceCheck check_linear_independence(const Instance& inst, std::span<const int> subset, double tol) {
  if (subset.empty()) throw InputError("check_linear_independence: empty subset");
  std::vector<int> labels(subset.begin(), subset.end());
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw InputError("check_linear_independence: repeated label");
  }
  CMatrix columns(static_cast<Eigen::Index>(inst.dim()), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t c = 0; c < labels.size(); ++c) columns.col(static_cast<Eigen::Index>(c)) = inst.state(labels[c]);

  IndependenceCheck check;
  const RealVec s = singular_values(columns);
  // More columns than rows leaves singular values only for the row space.
  check.min_singular = labels.size() > inst.dim() ? 0.0 : s(s.size() - 1);
  check.independent = rank(columns, tol) == labels.size();
  return check;
}

const CVector& ReciprocalSet::state(int label) const { return states[find_label(labels, label, "reciprocal set")]; }

double ReciprocalSet::q(int label) const { return overlaps[find_label(labels, label, "reciprocal set")]; }

ReciprocalSet reciprocal_set(const Instance& inst) {
  ReciprocalSet out;
  out.omit = inst.omit();
  out.labels = inst.retained();
  for (CVector& phi : dual_vectors(inst, out.labels)) {
    // <phi|Psi_j> = 1 before normalization, so the normalized overlap is
    // 1/||phi|| > 0 and no further phase fix is needed.
    phi.normalize();
    out.states.push_back(std::move(phi));
  }
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    out.overlaps.push_back(std::norm(out.states[i].dot(inst.state(out.labels[i]))));
  }
  return out;
}

const CVector& DualBasisOmit::vector(int label) const { return vectors[find_label(labels, label, "dual basis")]; }

DualBasisOmit dual_basis_omit(const Instance& inst, int l) {
  if (l < 1 || l > inst.n()) throw InputError("dual_basis_omit: label outside 1..N");
  if (l == inst.omit()) throw InputError("dual_basis_omit: l must differ from the omitted label");
  DualBasisOmit out;
  out.omitted = l;
  for (int k = 1; k <= inst.n(); ++k)
    if (k != l) out.labels.push_back(k);
  out.vectors = dual_vectors(inst, out.labels);
  return out;
}

CMatrix pairwise_overlaps(const Instance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.n());
  CMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      g(j, k) = inst.state(static_cast<int>(j) + 1).dot(inst.state(static_cast<int>(k) + 1));
    }
  }
  return g;
}

}  // namespace sepmeas
