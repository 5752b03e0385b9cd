#include "sepmeas/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sepmeas/errors.hpp"

namespace sepmeas {

namespace {

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

HermOp::HermOp(std::size_t dim)
    : matrix_(CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))) {
  if (dim == 0) throw InputError("HermOp: dimension must be positive");
}

HermOp::HermOp(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InputError("HermOp: matrix must be square and non-empty, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!all_finite(m)) throw InputError("HermOp: non-finite entry");
  const double asym = (m - m.adjoint()).norm();
  if (asym > kHermitianTol * m.norm()) {
    throw InputError("HermOp: matrix is not Hermitian (||H - H^dagger||_F = " +
                     std::to_string(asym) + ")");
  }
  matrix_ = (m + m.adjoint()) * 0.5;
}

HermOp HermOp::projector(const CVector& ket) {
  if (ket.size() == 0) throw InputError("HermOp::projector: empty ket");
  return HermOp(CMatrix(ket * ket.adjoint()), Trusted{});
}

HermOp HermOp::identity(std::size_t dim) {
  if (dim == 0) throw InputError("HermOp::identity: dimension must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  return HermOp(CMatrix::Identity(n, n), Trusted{});
}

HermOp HermOp::operator+(const HermOp& other) const {
  if (dim() != other.dim()) throw InputError("HermOp: dimension mismatch in sum");
  return HermOp(CMatrix(matrix_ + other.matrix_), Trusted{});
}

HermOp HermOp::operator-(const HermOp& other) const {
  if (dim() != other.dim()) throw InputError("HermOp: dimension mismatch in difference");
  return HermOp(CMatrix(matrix_ - other.matrix_), Trusted{});
}

HermOp HermOp::operator*(double scale) const { return HermOp(CMatrix(matrix_ * scale), Trusted{}); }

HermOp operator*(double scale, const HermOp& h) { return h * scale; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

HermOp kron(const HermOp& a, const HermOp& b) { return HermOp(kron(a.matrix(), b.matrix())); }

HermOp kron_all(std::span<const HermOp> factors) {
  if (factors.empty()) throw InputError("kron_all: no factors");
  CMatrix acc = factors.front().matrix();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i].matrix());
  return HermOp(acc);
}

CVector kron_all(std::span<const CVector> factors) {
  if (factors.empty()) throw InputError("kron_all: no factors");
  CVector acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i]);
  return acc;
}

EigenDecomposition herm_eigen(const HermOp& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eigen: eigensolver did not converge (dim " +
                         std::to_string(h.dim()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVec herm_eigenvalues(const HermOp& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const HermOp& h) { return herm_eigenvalues(h).minCoeff(); }

RealVec singular_values(const CMatrix& m) {
  if (m.size() == 0) return RealVec();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

std::size_t rank(const CMatrix& m, double tol) {
  if (!(tol > 0.0)) throw InputError("rank: tolerance must be positive");
  const RealVec s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol * s(0);
  return static_cast<std::size_t>((s.array() > cutoff).count());
}

HermOp partial_trace(const HermOp& h, std::span<const std::size_t> dims, std::size_t keep) {
  if (dims.empty() || keep >= dims.size()) throw InputError("partial_trace: invalid party index");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != h.dim()) {
    throw InputError("partial_trace: product of dims (" + std::to_string(total) +
                     ") != operator dimension (" + std::to_string(h.dim()) + ")");
  }
  // Stride of the kept party's digit in the flat (most-significant-first) index.
  std::size_t stride = 1;
  for (std::size_t a = keep + 1; a < dims.size(); ++a) stride *= dims[a];
  const std::size_t d = dims[keep];

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const CMatrix& m = h.matrix();
  for (std::size_t row = 0; row < total; ++row) {
    const std::size_t digit = (row / stride) % d;
    const std::size_t base = row - digit * stride;
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t col = base + c * stride;
      out(static_cast<Eigen::Index>(digit), static_cast<Eigen::Index>(c)) +=
          m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
  }
  return HermOp(out);
}

RealVec vec_herm(const HermOp& h) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  const CMatrix& m = h.matrix();
  RealVec out(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) out(k++) = m(i, i).real();
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(k++) = root2 * m(i, j).real();
      out(k++) = root2 * m(i, j).imag();
    }
  }
  return out;
}

double trace_product(const HermOp& a, const HermOp& b) {
  if (a.dim() != b.dim()) throw InputError("trace_product: dimension mismatch");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

double expectation(const HermOp& h, const CVector& ket) {
  if (static_cast<std::size_t>(ket.size()) != h.dim()) {
    throw InputError("expectation: dimension mismatch");
  }
  return ket.dot(h.matrix() * ket).real();
}

NnlsResult nnls(const RealMatrix& a, const RealVec& b, double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (n < 1) throw InputError("nnls: need at least one column");
  if (b.size() != m) throw InputError("nnls: right-hand side length mismatch");
  if (!(tol > 0.0)) throw InputError("nnls: tolerance must be positive");

  const int cap = 100 * static_cast<int>(n);
  const double scale = std::max(1.0, a.colwise().norm().maxCoeff() * b.norm());
  const double dual_tol = tol * scale;

  RealVec x = RealVec::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<bool> rejected(static_cast<std::size_t>(n), false);

  auto passive_indices = [&] {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    return idx;
  };
  auto solve_passive = [&](const std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return RealVec(RealVec::Zero(n));
    RealMatrix sub(m, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    const RealVec z = sub.colPivHouseholderQr().solve(b);
    RealVec s = RealVec::Zero(n);
    for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = z(static_cast<Eigen::Index>(c));
    return s;
  };

  int iterations = 0;
  for (;;) {
    const RealVec w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = dual_tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (!passive[uj] && !rejected[uj] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    if (++iterations > cap) {
      throw NumericalError("nnls: iteration cap (" + std::to_string(cap) + ") exceeded");
    }

    passive[static_cast<std::size_t>(best)] = true;
    RealVec s = solve_passive(passive_indices());
    if (s(best) <= 0.0) {
      // New column is numerically dependent on the passive set; its dual
      // value is rounding noise. Exclude it so the outer loop terminates.
      passive[static_cast<std::size_t>(best)] = false;
      rejected[static_cast<std::size_t>(best)] = true;
      continue;
    }
    std::fill(rejected.begin(), rejected.end(), false);

    for (int inner = 0;; ++inner) {
      if (inner > cap) throw NumericalError("nnls: inner iteration cap exceeded");
      bool feasible = true;
      for (Eigen::Index j : passive_indices()) {
        if (s(j) <= 0.0) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j : passive_indices()) {
        if (s(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      }
      x += alpha * (s - x);
      for (Eigen::Index j : passive_indices()) {
        if (x(j) <= std::numeric_limits<double>::epsilon() * scale) {
          x(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
      s = solve_passive(passive_indices());
    }
  }

  NnlsResult result;
  result.coefficients = x.cwiseMax(0.0);
  result.residual = (a * result.coefficients - b).norm();
  result.iterations = iterations;
  return result;
}

double von_neumann_entropy(const HermOp& rho, double log_base, double tol) {
  if (!(log_base > 0.0) || log_base == 1.0) throw InputError("von_neumann_entropy: invalid log base");
  if (std::abs(rho.trace() - 1.0) > tol) {
    throw InputError("von_neumann_entropy: trace " + std::to_string(rho.trace()) + " is not 1");
  }
  const RealVec lambda = herm_eigenvalues(rho);
  if (lambda.minCoeff() < -tol) {
    throw InputError("von_neumann_entropy: negative eigenvalue " + std::to_string(lambda.minCoeff()));
  }
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double l = lambda(i);
    if (l > 0.0) entropy -= l * std::log(l);
  }
  return entropy / std::log(log_base);
}

}  // namespace sepmeas
