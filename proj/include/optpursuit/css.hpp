#pragma once

#include <string_view>
#include <vector>

#include "optpursuit/criteria.hpp"
#include "optpursuit/densela.hpp"

namespace optpursuit {

namespace css {

/// Least-squares reconstruction of every column of X from the columns in S.
struct CssState {
  std::vector<Index> support;
  Matrix coeff;      // B, |S| x p
  Matrix residual;   // R = X - X_S B, n x p
  la::SpdInverse inverse;
  double explained = 0.0;  // trace(X^T X_S C X_S^T X)

  Index size() const noexcept { return support.size(); }
};

enum class Variant { ClassicGreedy, OptimalGreedy, ClassicExchange, OptimalExchange };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view name);

struct CssReport {
  std::vector<Index> support;  // ascending
  Matrix coeff;                // rows follow `support`
  double relative_error = 0.0; // ||X - X_S B||_F / ||X||_F
  Index swaps = 0;             // accepted exchange rounds
};

CssState css_fit(const DenseMatrix& X, std::span<const Index> S);
CssState css_extend(const DenseMatrix& X, const CssState& state, Index j);

CssReport css_solve(const DenseMatrix& X, Index K, Variant variant);

// Top-K columns by leverage over the leading n_vectors right singular vectors.
CssReport leverage_score_baseline(const DenseMatrix& X, Index K, Index n_vectors);

// sqrt(sum_{i>K} sigma_i^2) / ||X||_F
double svd_rank_bound(const DenseMatrix& X, Index K);

}  // namespace css

namespace criteria {

// Optimal: ||R^T x_j||^2 / x_j^T (I - H) x_j.  Classic: ||R^T x_j||^2 / x_j^T x_j.
// Both exclude columns already in the span of the support.
CriterionScores css_selection(const DenseMatrix& X, const css::CssState& state, std::span<const Index> candidates,
                              bool classic = false);

// Optimal: explained energy of S \ {j} (drop argmax).
// Classic: ||x_j||^2 ||B[i,:]||^2 (drop argmin).
CriterionScores css_elimination(const DenseMatrix& X, const css::CssState& state, bool classic = false);

// Optimal elimination through the trace of the sandwich form.
CriterionScores css_elimination_sandwich(const DenseMatrix& X, const css::CssState& state);

}  // namespace criteria
}  // namespace optpursuit
