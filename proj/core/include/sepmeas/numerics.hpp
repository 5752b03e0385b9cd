#pragma once

// Dense complex linear algebra used throughout the library. Vectors and
// matrices are plain Eigen types; HermOp wraps a square matrix that is
// guaranteed Hermitian.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sepmeas {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

class HermOp {
 public:
  /// Zero operator of the given dimension.
  explicit HermOp(std::size_t dim = 1);

  /// Symmetrizes to (m + m^dagger)/2. Throws InputError when m is not square,
  /// has non-finite entries, or is asymmetric beyond kHermitianTol relative
  /// to its Frobenius norm.
  explicit HermOp(const CMatrix& m);

  static HermOp projector(const CVector& ket);
  static HermOp identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  double frobenius_norm() const { return matrix_.norm(); }

  HermOp operator+(const HermOp& other) const;
  HermOp operator-(const HermOp& other) const;
  HermOp operator*(double scale) const;

 private:
  struct Trusted {};
  HermOp(CMatrix m, Trusted) : matrix_(std::move(m)) {}

  CMatrix matrix_;
};

HermOp operator*(double scale, const HermOp& h);

struct EigenDecomposition {
  RealVec values;   // ascending
  CMatrix vectors;  // columns are orthonormal eigenvectors
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);
HermOp kron(const HermOp& a, const HermOp& b);

/// Left-to-right Kronecker product; factor 0 is the most significant index.
HermOp kron_all(std::span<const HermOp> factors);
CVector kron_all(std::span<const CVector> factors);

EigenDecomposition herm_eigen(const HermOp& h);
RealVec herm_eigenvalues(const HermOp& h);
double min_eigenvalue(const HermOp& h);

RealVec singular_values(const CMatrix& m);

/// Number of singular values above tol times the largest one.
std::size_t rank(const CMatrix& m, double tol = kDefaultTol);

/// Reduced operator on party `keep` (0-based) of a system with the given
/// per-party dimensions.
HermOp partial_trace(const HermOp& h, std::span<const std::size_t> dims, std::size_t keep);

/// Real isometric coordinates of a Hermitian operator: the diagonal in
/// ascending order, then for each upper off-diagonal entry in row-major
/// order sqrt(2)*Re followed by sqrt(2)*Im. <vec A, vec B> = Tr(AB).
RealVec vec_herm(const HermOp& h);

/// Tr(AB) for Hermitian A, B.
double trace_product(const HermOp& a, const HermOp& b);

/// <ket| H |ket>, real part.
double expectation(const HermOp& h, const CVector& ket);

struct NnlsResult {
  RealVec coefficients;
  double residual = 0.0;  // ||A x - b||_2 at the returned x
  int iterations = 0;
};

/// Lawson-Hanson active-set solution of min ||A x - b|| subject to x >= 0.
/// Throws NumericalError after 100 * columns outer iterations.
NnlsResult nnls(const RealMatrix& a, const RealVec& b, double tol = kDefaultTol);

/// -sum lambda log(lambda) / log(log_base). Throws InputError if rho has an
/// eigenvalue below -tol or a trace further than tol from 1.
double von_neumann_entropy(const HermOp& rho, double log_base, double tol = kDefaultTol);

}  // namespace sepmeas
