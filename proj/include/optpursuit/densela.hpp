#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "optpursuit/error.hpp"

namespace optpursuit {

using Index = std::size_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace la {

// Reciprocal-condition floor for a support Gram matrix to count as invertible.
inline constexpr double kMinRcond = 1e-12;
// Relative floor on the Schur complement of a bordered Gram matrix.
inline constexpr double kMinBorder = 1e-12;
// Absolute floor on the pivot removed by a backward update.
inline constexpr double kMinPivot = 1e-14;
// A cached inverse is rebuilt from scratch after this many rank-one updates.
inline constexpr int kRefactorEvery = 64;

/// Column-major real matrix with finite entries. Thin wrapper over an Eigen
/// matrix so that construction can validate the data once.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, std::vector<double> column_major);
  explicit DenseMatrix(Matrix m);

  Index rows() const noexcept { return static_cast<Index>(m_.rows()); }
  Index cols() const noexcept { return static_cast<Index>(m_.cols()); }
  const Matrix& mat() const noexcept { return m_; }
  auto col(Index j) const { return m_.col(static_cast<Eigen::Index>(j)); }
  double operator()(Index i, Index j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Matrix m_;
};

/// Cached inverse of a support Gram matrix (X_S^T X_S)^{-1}.
class SpdInverse {
 public:
  SpdInverse() = default;
  explicit SpdInverse(Matrix inv);

  Index dim() const noexcept { return static_cast<Index>(inv_.rows()); }
  const Matrix& inv() const noexcept { return inv_; }
  double operator()(Index i, Index j) const {
    return inv_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // Inverts an SPD matrix via LLT; throws SingularGram below kMinRcond.
  static SpdInverse from_gram(const Matrix& gram);

 private:
  Matrix inv_;
};

/// Least-squares fit on an ordered support. Columns of S keep insertion order.
struct SupportState {
  std::vector<Index> support;
  SpdInverse inverse;
  Vector beta;             // over support, same order
  Vector residual;         // length n
  double explained_energy = 0.0;
  int updates_since_refactor = 0;

  Index size() const noexcept { return support.size(); }
  // Full-length coefficient vector with zeros off support.
  Vector dense_beta(Index p) const;
};

Matrix gather_columns(const DenseMatrix& X, std::span<const Index> S);

SupportState least_squares_on_support(const DenseMatrix& X, const Vector& y,
                                      std::span<const Index> S);

// Bordered inverse: A_inv is dim x dim, u = X_S^T x_new, alpha = x_new^T x_new.
SpdInverse forward_inverse_update(const SpdInverse& A_inv, const Vector& u, double alpha);

// Removes row/column drop_pos, keeping the relative order of the others.
SpdInverse backward_inverse_update(const SpdInverse& B_inv, Index drop_pos);

// x_j^T x_j - (X_S^T x_j)^T C (X_S^T x_j) for each candidate, clamped at zero.
Vector projected_gram_diag(const DenseMatrix& X, const SupportState& state,
                           std::span<const Index> candidates);

// Appends column j and refits, reusing the cached inverse. Falls back to a fresh
// factorization every kRefactorEvery updates or when the border is near-singular.
SupportState add_to_support(const DenseMatrix& X, const Vector& y, const SupportState& state,
                            Index j);

// Drops the column at position pos of the support and refits.
SupportState remove_from_support(const DenseMatrix& X, const Vector& y,
                                 const SupportState& state, Index pos);

// Keeps only the given support positions (any order) via repeated backward
// updates, then refits once. The result lists the kept columns in their
// original relative order.
SupportState restrict_support(const DenseMatrix& X, const Vector& y, const SupportState& state,
                              std::span<const Index> keep_positions);

}  // namespace la

using la::DenseMatrix;

}  // namespace optpursuit
