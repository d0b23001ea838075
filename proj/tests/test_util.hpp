#pragma once

#include <vector>

#include "optpursuit/densela.hpp"
#include "optpursuit/probgen.hpp"

namespace testutil {

using namespace optpursuit;

// The 3x3 design on which correlation-greedy selection misses the best pair.
inline DenseMatrix counterexample_X() {
  Matrix m(3, 3);
  m << 0.2, 0.0, 0.0,
       0.0, 0.8, 0.9,
       0.0, 0.1, 0.1;
  return DenseMatrix(m);
}

inline Vector counterexample_y() { return Vector{{0.2, 0.85, 0.1}}; }

inline DenseMatrix gaussian(Index n, Index p, std::uint64_t seed) { return probgen::gaussian_design(n, p, seed); }

inline Vector gaussian_vec(Index n, std::uint64_t seed) {
  return probgen::gaussian_design(n, 1, seed).mat().col(0);
}

// Orthonormal columns scaled to distinct norms.
inline DenseMatrix orthogonal(Index n, Index p, std::uint64_t seed, bool distinct_norms = true) {
  const Matrix G = probgen::gaussian_design(n, p, seed).mat();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  if (distinct_norms)
    for (Eigen::Index j = 0; j < Q.cols(); ++j) Q.col(j) *= 1.0 + 0.37 * static_cast<double>(j);
  return DenseMatrix(Q);
}

inline Matrix random_spd(Index d, std::uint64_t seed) {
  const Matrix G = probgen::gaussian_design(d + 3, d, seed).mat();
  return G.transpose() * G + 0.1 * Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

// Normal-equation solve by an unrelated factorization.
inline Vector ls_oracle(const DenseMatrix& X, const Vector& y, const std::vector<Index>& S) {
  const Matrix Xs = la::gather_columns(X, S);
  return (Xs.transpose() * Xs).fullPivLu().solve(Xs.transpose() * y);
}

inline double rel_fro(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace testutil
