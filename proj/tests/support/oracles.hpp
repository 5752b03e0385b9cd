#pragma once

// Test-only reference computations. Each one takes a route that does not go
// through the library function it is used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace sepmeas::oracle {

using cd = std::complex<double>;

/// Kronecker product straight from the index formula.
inline Eigen::MatrixXcd kron_by_index(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    }
  }
  return out;
}

/// Reduced state of the first party of a bipartite pure state: reshape the
/// amplitudes into a dA x dB matrix M and form M M^dagger.
inline Eigen::MatrixXcd reduced_first_by_reshape(const Eigen::VectorXcd& ket, Eigen::Index da, Eigen::Index db) {
  Eigen::MatrixXcd m(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) m(i, j) = ket(i * db + j);
  return m * m.adjoint();
}

/// Eigenvalues of a 2x2 Hermitian matrix in closed form, ascending.
inline std::pair<double, double> eig2x2(const Eigen::Matrix2cd& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {0.5 * (a + d) - r, 0.5 * (a + d) + r};
}

/// Conic membership by exhaustive enumeration of generator subsets. By
/// Caratheodory's theorem b lies in cone(columns) iff some linearly
/// independent subset reproduces b exactly with nonnegative coefficients.
inline bool conic_member(const Eigen::MatrixXd& columns, const Eigen::VectorXd& b, double rel_tol = 1e-9) {
  const auto n = static_cast<unsigned>(columns.cols());
  const double scale = std::max(1.0, b.norm());
  if (b.norm() <= rel_tol) return true;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Eigen::Index> idx;
    for (unsigned c = 0; c < n; ++c)
      if (mask & (1u << c)) idx.push_back(static_cast<Eigen::Index>(c));
    if (idx.size() > static_cast<std::size_t>(b.size())) continue;
    Eigen::MatrixXd sub(columns.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = columns.col(idx[c]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 1e-9 * s(0)) continue;  // dependent subset; a smaller one covers it
    const Eigen::VectorXd lambda = svd.solve(b);
    if (lambda.minCoeff() < -1e-12 * scale) continue;
    if ((sub * lambda - b).norm() <= rel_tol * scale) return true;
  }
  return false;
}

inline Eigen::VectorXcd random_ket(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cd(g(rng), g(rng));
  return v.normalized();
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cd(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

/// Sum of `rank` random rank-1 projectors with positive weights.
inline Eigen::MatrixXcd random_psd(Eigen::Index dim, int rank, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.2, 2.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < rank; ++r) {
    const Eigen::VectorXcd v = random_ket(dim, rng);
    m += w(rng) * v * v.adjoint();
  }
  return 0.5 * (m + m.adjoint());
}

/// Extremality of ops[i] decided by conic_member over every operator not
/// parallel to it. Coordinates are the real and imaginary parts of all
/// entries.
inline bool extreme_by_enumeration(const std::vector<Eigen::MatrixXcd>& ops, std::size_t i) {
  const auto flat = [](const Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.size();
    Eigen::VectorXd v(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
      v(k) = m(k).real();
      v(n + k) = m(k).imag();
    }
    return v;
  };
  const Eigen::MatrixXcd target = ops[i] / ops[i].norm();
  std::vector<Eigen::VectorXd> cols;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Eigen::MatrixXcd u = ops[k] / ops[k].norm();
    if ((u - target).norm() <= 1e-8) continue;
    cols.push_back(flat(u));
  }
  if (cols.empty()) return true;
  Eigen::MatrixXd a(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = cols[k];
  return !conic_member(a, flat(target));
}

/// Random PSD set of 2..6 operators on dimension 2 or 3. Some sets get a
/// positive combination of two members or a scaled duplicate so that
/// non-extreme and parallel cases show up regularly.
inline std::vector<Eigen::MatrixXcd> random_cone_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_pick(2, 3);
  std::uniform_int_distribution<int> count_pick(2, 6);
  std::uniform_real_distribution<double> coef(0.1, 2.0);
  std::uniform_int_distribution<int> mode(0, 3);
  const int dim = dim_pick(rng);
  const int count = count_pick(rng);
  std::uniform_int_distribution<int> rank_pick(1, dim);
  std::vector<Eigen::MatrixXcd> ops;
  for (int k = 0; k < count; ++k) ops.push_back(random_psd(dim, rank_pick(rng), rng));
  if (count >= 3) {
    std::uniform_int_distribution<int> idx(0, count - 1);
    const int m = mode(rng);
    const int a = idx(rng);
    int b = idx(rng);
    if (b == a) b = (a + 1) % count;
    int c = idx(rng);
    while (c == a || c == b) c = (c + 1) % count;
    if (m == 1) ops[static_cast<std::size_t>(c)] = coef(rng) * ops[static_cast<std::size_t>(a)] + coef(rng) * ops[static_cast<std::size_t>(b)];
    if (m == 2) ops[static_cast<std::size_t>(c)] = coef(rng) * ops[static_cast<std::size_t>(a)];
  }
  return ops;
}

/// I' - Pi written entry by entry: a basis index of the enlarged space is
/// zeroed when every party's digit lies inside the original dimension.
inline Eigen::MatrixXcd complement_by_index(const std::vector<std::size_t>& dims,
                                            const std::vector<std::size_t>& big) {
  std::size_t total = 1;
  for (std::size_t e : big) total *= e;
  const auto n = static_cast<Eigen::Index>(total);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    bool inside = true;
    for (std::size_t a = big.size(); a-- > 0;) {
      inside = inside && rest % big[a] < dims[a];
      rest /= big[a];
    }
    if (inside) out(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 0.0;
  }
  return out;
}

}  // namespace sepmeas::oracle
