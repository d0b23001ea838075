#include "optpursuit/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optpursuit/kernels.hpp"

namespace optpursuit::criteria {

namespace {

using EIdx = Eigen::Index;

std::vector<Index> to_vector(std::span<const Index> s) { return {s.begin(), s.end()}; }

void require_nonzero(double sq_norm, Index j) {
  if (!(sq_norm > 0.0)) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");
}

}  // namespace

std::size_t CriterionScores::best_position() const {
  std::size_t best = npos;
  const bool by_min = is_elimination() && drops_by_min();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!is_elimination() && s == kExcluded) continue;
    if (best == npos) {
      best = i;
      continue;
    }
    const double b = scores[best];
    const bool better = by_min ? s < b : s > b;
    if (better || (s == b && indices[i] < indices[best])) best = i;
  }
  return best;
}

std::vector<std::size_t> CriterionScores::ranked_positions() const {
  std::vector<std::size_t> pos(scores.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  const bool by_min = is_elimination() && drops_by_min();
  std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores[a], sb = scores[b];
    if (sa != sb) return by_min ? sa < sb : sa > sb;
    return indices[a] < indices[b];
  });
  return pos;
}

std::vector<Index> complement(Index p, std::span<const Index> support) {
  std::vector<char> in(p, 0);
  for (Index j : support) in.at(j) = 1;
  std::vector<Index> out;
  out.reserve(p - support.size());
  for (Index j = 0; j < p; ++j)
    if (!in[j]) out.push_back(j);
  return out;
}

CriterionScores corr_selection(const DenseMatrix& X, const Vector& residual, std::span<const Index> candidates) {
  Vector corr;
  kernels::correlations(X.mat(), residual, candidates, corr);
  CriterionScores out{to_vector(candidates), std::vector<double>(candidates.size()), Kind::CorrSelect, false};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double nrm = X.col(candidates[i]).squaredNorm();
    require_nonzero(nrm, candidates[i]);
    const double c = corr(static_cast<EIdx>(i));
    out.scores[i] = c * c / nrm;
  }
  return out;
}

CriterionScores corr_selection(const DenseMatrix& X, const la::SupportState& state,
                               std::span<const Index> candidates) {
  return corr_selection(X, state.residual, candidates);
}

CriterionScores wald_elimination(const la::SupportState& state, const DenseMatrix& X) {
  CriterionScores out{state.support, std::vector<double>(state.size()), Kind::WaldEliminate, false};
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double b = state.beta(static_cast<EIdx>(i));
    out.scores[i] = X.col(state.support[i]).squaredNorm() * b * b;
  }
  return out;
}

CriterionScores optimal_selection(const DenseMatrix& X, const Vector& residual, std::span<const Index> candidates,
                                  const Vector& projected_diag) {
  if (static_cast<std::size_t>(projected_diag.size()) != candidates.size())
    throw Error(ErrorCode::DimensionMismatch, "projected diagonal length does not match candidates");
  Vector corr;
  kernels::correlations(X.mat(), residual, candidates, corr);
  CriterionScores out{to_vector(candidates), std::vector<double>(candidates.size()), Kind::OptSelect, false};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double nrm = X.col(candidates[i]).squaredNorm();
    require_nonzero(nrm, candidates[i]);
    const double d = projected_diag(static_cast<EIdx>(i));
    const double c = corr(static_cast<EIdx>(i));
    out.scores[i] = d <= kSpanTol * nrm ? kExcluded : c * c / d;
  }
  return out;
}

CriterionScores optimal_selection(const DenseMatrix& X, const la::SupportState& state,
                                  std::span<const Index> candidates) {
  const Vector d = la::projected_gram_diag(X, state, candidates);
  return optimal_selection(X, state.residual, candidates, d);
}

CriterionScores optimal_elimination(const DenseMatrix& /*X*/, const Vector& /*y*/, const la::SupportState& state) {
  if (state.size() == 0) throw Error(ErrorCode::InvalidArgument, "elimination on an empty support");
  CriterionScores out{state.support, std::vector<double>(state.size()), Kind::OptEliminate, false};
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double cjj = state.inverse(i, i);
    if (!(cjj > la::kMinPivot)) throw Error(ErrorCode::DegeneratePivot, "C_jj = " + std::to_string(cjj));
    const double b = state.beta(static_cast<EIdx>(i));
    out.scores[i] = state.explained_energy - b * b / cjj;
  }
  return out;
}

CriterionScores optimal_elimination_sandwich(const DenseMatrix& X, const Vector& y, const la::SupportState& state) {
  if (state.size() == 0) throw Error(ErrorCode::InvalidArgument, "elimination on an empty support");
  const EIdx k = static_cast<EIdx>(state.size());
  const Matrix Xs = la::gather_columns(X, state.support);
  const Vector xty = Xs.transpose() * y;
  const Matrix& C = state.inverse.inv();
  CriterionScores out{state.support, std::vector<double>(state.size()), Kind::OptEliminate, false};
  for (EIdx j = 0; j < k; ++j) {
    const double cjj = C(j, j);
    if (!(cjj > la::kMinPivot)) throw Error(ErrorCode::DegeneratePivot, "C_jj = " + std::to_string(cjj));
    Matrix P = Matrix::Identity(k, k);
    P(j, j) = 0.0;
    const Matrix inner = C - (C.col(j) * C.row(j)) / cjj;
    const Vector v = P * xty;
    out.scores[static_cast<std::size_t>(j)] = v.dot(P * inner * P * v);
  }
  return out;
}

CriterionScores ogp_selection(const DenseMatrix& X, std::span<const Index> support, const Vector& residual,
                              std::span<const Index> candidates) {
  // Support-level terms are formed once per call.
  const Matrix Xs = la::gather_columns(X, support);
  const Vector a = Xs.transpose() * residual;
  const Vector v = Xs * a;
  const double a2 = a.squaredNorm();
  const double v2 = v.squaredNorm();
  Vector corr, vx;
  kernels::correlations(X.mat(), residual, candidates, corr);
  kernels::correlations(X.mat(), v, candidates, vx);

  CriterionScores out{to_vector(candidates), std::vector<double>(candidates.size()), Kind::OgpSelect, false};
  bool any_nonzero = candidates.empty();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double nrm = X.col(candidates[i]).squaredNorm();
    require_nonzero(nrm, candidates[i]);
    const double c = corr(static_cast<EIdx>(i));
    const double num = a2 + c * c;
    const double den2 = v2 + 2.0 * c * vx(static_cast<EIdx>(i)) + c * c * nrm;
    const double den = std::sqrt(std::max(den2, 0.0));
    if (den > 0.0) {
      out.scores[i] = num / den;
      any_nonzero = true;
    } else {
      out.scores[i] = 0.0;
    }
  }
  if (!any_nonzero) throw Error(ErrorCode::ZeroDenominator, "gradient gain vanishes for every candidate");
  return out;
}

CriterionScores ogp_selection(const DenseMatrix& X, const la::SupportState& state,
                              std::span<const Index> candidates) {
  return ogp_selection(X, state.support, state.residual, candidates);
}

}  // namespace optpursuit::criteria
