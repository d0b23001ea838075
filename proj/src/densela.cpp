#include "optpursuit/densela.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "optpursuit/kernels.hpp"

namespace optpursuit::la {

namespace {

using EIdx = Eigen::Index;

void check_finite(const Matrix& m) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFiniteInput, "matrix has NaN or Inf entries");
}

#ifndef NDEBUG
void debug_check_inverse(const SpdInverse& c, const Matrix& gram) {
  if (c.dim() == 0) return;
  const Matrix prod = c.inv() * gram;
  const double err = (prod - Matrix::Identity(prod.rows(), prod.cols())).norm();
  // relative to the conditioning of the pair
  assert(err <= 1e-8 * std::max(1.0, c.inv().norm() * gram.norm()));
  (void)err;
}
#endif

void check_support(const DenseMatrix& X, std::span<const Index> S) {
  std::vector<Index> sorted(S.begin(), S.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::InvalidArgument, "support indices are not distinct");
  if (!sorted.empty() && sorted.back() >= X.cols())
    throw Error(ErrorCode::IndexOutOfRange,
                "support index " + std::to_string(sorted.back()) + " >= p=" + std::to_string(X.cols()));
}

// beta, residual and explained energy from a support and its cached inverse.
void refit(const DenseMatrix& X, const Vector& y, SupportState& s) {
  const Matrix Xs = gather_columns(X, s.support);
  const Vector xty = Xs.transpose() * y;
  s.beta = s.inverse.inv() * xty;
  s.residual = y - Xs * s.beta;
  s.explained_energy = s.beta.dot(xty);
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols, std::vector<double> column_major) {
  if (column_major.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, "data length " + std::to_string(column_major.size()) +
                                                  " != rows*cols " + std::to_string(rows * cols));
  m_ = Eigen::Map<const Matrix>(column_major.data(), static_cast<EIdx>(rows), static_cast<EIdx>(cols));
  check_finite(m_);
}

DenseMatrix::DenseMatrix(Matrix m) : m_(std::move(m)) { check_finite(m_); }

SpdInverse::SpdInverse(Matrix inv) : inv_(std::move(inv)) {
  if (inv_.rows() != inv_.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse must be square");
}

SpdInverse SpdInverse::from_gram(const Matrix& gram) {
  if (gram.rows() == 0) return SpdInverse(Matrix(0, 0));
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularGram, "Gram matrix is not positive definite");
  const double rc = llt.rcond();
  if (!(rc >= kMinRcond))
    throw Error(ErrorCode::SingularGram, "reciprocal condition " + std::to_string(rc) + " below threshold");
  Matrix inv = llt.solve(Matrix::Identity(gram.rows(), gram.cols()));
  inv = 0.5 * (inv + inv.transpose()).eval();
  return SpdInverse(std::move(inv));
}

Vector SupportState::dense_beta(Index p) const {
  Vector out = Vector::Zero(static_cast<EIdx>(p));
  for (Index i = 0; i < support.size(); ++i) out(static_cast<EIdx>(support[i])) = beta(static_cast<EIdx>(i));
  return out;
}

Matrix gather_columns(const DenseMatrix& X, std::span<const Index> S) {
  Matrix out(static_cast<EIdx>(X.rows()), static_cast<EIdx>(S.size()));
  for (Index i = 0; i < S.size(); ++i) out.col(static_cast<EIdx>(i)) = X.col(S[i]);
  return out;
}

SupportState least_squares_on_support(const DenseMatrix& X, const Vector& y, std::span<const Index> S) {
  if (static_cast<Index>(y.size()) != X.rows())
    throw Error(ErrorCode::DimensionMismatch, "y length does not match rows of X");
  check_support(X, S);
  SupportState s;
  s.support.assign(S.begin(), S.end());
  const Matrix Xs = gather_columns(X, S);
  const Matrix gram = Xs.transpose() * Xs;
  s.inverse = SpdInverse::from_gram(gram);
#ifndef NDEBUG
  debug_check_inverse(s.inverse, gram);
#endif
  refit(X, y, s);
  return s;
}

SpdInverse forward_inverse_update(const SpdInverse& A_inv, const Vector& u, double alpha) {
  if (static_cast<Index>(u.size()) != A_inv.dim())
    throw Error(ErrorCode::DimensionMismatch, "border vector length does not match inverse");
  const EIdx d = static_cast<EIdx>(A_inv.dim());
  const Vector w = A_inv.inv() * u;  // A^{-1} u
  const double t = alpha - u.dot(w);
  if (!(std::abs(t) > kMinBorder * std::abs(alpha)))
    throw Error(ErrorCode::NearSingularBorder,
                "Schur complement " + std::to_string(t) + " too small relative to alpha");
  Matrix out(d + 1, d + 1);
  out.topLeftCorner(d, d) = A_inv.inv() + (w * w.transpose()) / t;
  out.topRightCorner(d, 1) = -w / t;
  out.bottomLeftCorner(1, d) = (-w / t).transpose();
  out(d, d) = 1.0 / t;
  return SpdInverse(std::move(out));
}

SpdInverse backward_inverse_update(const SpdInverse& B_inv, Index drop_pos) {
  const Index dim = B_inv.dim();
  if (drop_pos >= dim)
    throw Error(ErrorCode::IndexOutOfRange, "drop position " + std::to_string(drop_pos) + " >= dim");
  const EIdx k = static_cast<EIdx>(drop_pos);
  const double gamma = B_inv.inv()(k, k);
  if (!(gamma > kMinPivot)) throw Error(ErrorCode::DegeneratePivot, "pivot " + std::to_string(gamma));
  const EIdx m = static_cast<EIdx>(dim) - 1;
  // Symmetric permutation of drop_pos to the last slot, then G - w z^T / gamma.
  std::vector<EIdx> keep;
  keep.reserve(static_cast<std::size_t>(m));
  for (EIdx i = 0; i <= m; ++i)
    if (i != k) keep.push_back(i);
  Matrix G(m, m);
  Vector w(m);
  for (EIdx a = 0; a < m; ++a) {
    w(a) = B_inv.inv()(keep[a], k);
    for (EIdx b = 0; b < m; ++b) G(a, b) = B_inv.inv()(keep[a], keep[b]);
  }
  G.noalias() -= (w * w.transpose()) / gamma;
  return SpdInverse(std::move(G));
}

Vector projected_gram_diag(const DenseMatrix& X, const SupportState& state,
                           std::span<const Index> candidates) {
  Vector out(static_cast<EIdx>(candidates.size()));
  if (state.size() == 0) {
    for (Index i = 0; i < candidates.size(); ++i) out(static_cast<EIdx>(i)) = X.col(candidates[i]).squaredNorm();
    return out;
  }
  const Matrix Xs = gather_columns(X, state.support);
  kernels::projected_diag(X.mat(), Xs, state.inverse.inv(), candidates, out);
  for (EIdx i = 0; i < out.size(); ++i) out(i) = std::max(out(i), 0.0);
  return out;
}

SupportState add_to_support(const DenseMatrix& X, const Vector& y, const SupportState& state, Index j) {
  if (j >= X.cols()) throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j));
  if (std::find(state.support.begin(), state.support.end(), j) != state.support.end())
    throw Error(ErrorCode::InvalidArgument, "column " + std::to_string(j) + " already in support");
  std::vector<Index> next = state.support;
  next.push_back(j);
  if (state.updates_since_refactor + 1 >= kRefactorEvery) return least_squares_on_support(X, y, next);

  SupportState s;
  const Matrix Xs = gather_columns(X, state.support);
  const Vector u = Xs.transpose() * X.col(j);
  try {
    s.inverse = forward_inverse_update(state.inverse, u, X.col(j).squaredNorm());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NearSingularBorder) throw;
    return least_squares_on_support(X, y, next);
  }
  s.support = std::move(next);
  s.updates_since_refactor = state.updates_since_refactor + 1;
  refit(X, y, s);
  return s;
}

SupportState remove_from_support(const DenseMatrix& X, const Vector& y, const SupportState& state, Index pos) {
  if (pos >= state.size()) throw Error(ErrorCode::IndexOutOfRange, "support position " + std::to_string(pos));
  std::vector<Index> next = state.support;
  next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
  if (state.updates_since_refactor + 1 >= kRefactorEvery) return least_squares_on_support(X, y, next);
  SupportState s;
  try {
    s.inverse = backward_inverse_update(state.inverse, pos);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePivot) throw;
    return least_squares_on_support(X, y, next);
  }
  s.support = std::move(next);
  s.updates_since_refactor = state.updates_since_refactor + 1;
  refit(X, y, s);
  return s;
}

SupportState restrict_support(const DenseMatrix& X, const Vector& y, const SupportState& state,
                              std::span<const Index> keep_positions) {
  std::vector<char> keep(state.size(), 0);
  for (Index pos : keep_positions) {
    if (pos >= state.size()) throw Error(ErrorCode::IndexOutOfRange, "support position " + std::to_string(pos));
    keep[pos] = 1;
  }
  std::vector<Index> next;
  for (Index i = 0; i < state.size(); ++i)
    if (keep[i]) next.push_back(state.support[i]);
  const Index drops = state.size() - next.size();
  if (state.updates_since_refactor + static_cast<int>(drops) >= kRefactorEvery)
    return least_squares_on_support(X, y, next);

  SpdInverse inv = state.inverse;
  try {
    // Descending positions keep the earlier ones valid.
    for (Index i = state.size(); i-- > 0;)
      if (!keep[i]) inv = backward_inverse_update(inv, i);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePivot) throw;
    return least_squares_on_support(X, y, next);
  }
  SupportState s;
  s.support = std::move(next);
  s.inverse = std::move(inv);
  s.updates_since_refactor = state.updates_since_refactor + static_cast<int>(drops);
  refit(X, y, s);
  return s;
}

}  // namespace optpursuit::la
