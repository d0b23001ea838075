#pragma once

#include <limits>
#include <span>
#include <vector>

#include "optpursuit/densela.hpp"

namespace optpursuit::criteria {

enum class Kind {
  CorrSelect,
  WaldEliminate,
  OptSelect,
  OptEliminate,
  OgpSelect,
  CssSelect,
  CssEliminate,
};

inline constexpr double kExcluded = -std::numeric_limits<double>::infinity();
// A candidate whose projected energy is below this fraction of its own energy
// lies in the span of the current support.
inline constexpr double kSpanTol = 1e-12;

/// Per-index scores from one criterion evaluation. Selection kinds are picked
/// by argmax. Elimination kinds are picked by whichever extreme marks the
/// feature whose removal costs least: argmin for WaldEliminate and classic
/// CssEliminate, argmax for OptEliminate and optimal CssEliminate.
struct CriterionScores {
  std::vector<Index> indices;
  std::vector<double> scores;
  Kind kind = Kind::CorrSelect;
  bool classic = false;  // only meaningful for the Css kinds

  bool is_elimination() const noexcept {
    return kind == Kind::WaldEliminate || kind == Kind::OptEliminate || kind == Kind::CssEliminate;
  }
  bool drops_by_min() const noexcept {
    return kind == Kind::WaldEliminate || (kind == Kind::CssEliminate && classic);
  }

  // Position (into indices) of the chosen entry; lowest index wins ties.
  // Returns npos when every selection score is excluded.
  std::size_t best_position() const;
  Index best_index() const { return indices.at(best_position()); }

  // Positions ordered from most to least preferred (selection: highest score
  // first; elimination: most removable first). Excluded selection entries go last.
  std::vector<std::size_t> ranked_positions() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Complement of the support in [0, p), ascending.
std::vector<Index> complement(Index p, std::span<const Index> support);

// (r^T x_j)^2 / x_j^T x_j
CriterionScores corr_selection(const DenseMatrix& X, const Vector& residual,
                               std::span<const Index> candidates);
CriterionScores corr_selection(const DenseMatrix& X, const la::SupportState& state,
                               std::span<const Index> candidates);

// (x_j^T x_j) beta_j^2 over the support; drop the argmin.
CriterionScores wald_elimination(const la::SupportState& state, const DenseMatrix& X);

// (r^T x_j)^2 / x_j^T (I - H) x_j; span-collinear candidates get kExcluded.
CriterionScores optimal_selection(const DenseMatrix& X, const la::SupportState& state,
                                  std::span<const Index> candidates);
// Same scores from a precomputed projected diagonal (one entry per candidate).
CriterionScores optimal_selection(const DenseMatrix& X, const Vector& residual,
                                  std::span<const Index> candidates, const Vector& projected_diag);

// Explained energy of S \ {j}: explained(S) - beta_j^2 / C_jj; drop the argmax.
CriterionScores optimal_elimination(const DenseMatrix& X, const Vector& y, const la::SupportState& state);
// Same quantity through the explicit sandwich form y^T X_S (I-ee^T)(C - Cee^TC/e^TCe)(I-ee^T) X_S^T y.
CriterionScores optimal_elimination_sandwich(const DenseMatrix& X, const Vector& y,
                                             const la::SupportState& state);

// Gradient-step gain of S u {j}:
// (||X_S^T r||^2 + (r^T x_j)^2) / ||X_S X_S^T r + x_j x_j^T r||.
CriterionScores ogp_selection(const DenseMatrix& X, std::span<const Index> support, const Vector& residual,
                              std::span<const Index> candidates);
CriterionScores ogp_selection(const DenseMatrix& X, const la::SupportState& state,
                              std::span<const Index> candidates);

}  // namespace optpursuit::criteria
