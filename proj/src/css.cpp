#include "optpursuit/css.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optpursuit/kernels.hpp"

namespace optpursuit {

namespace {

using EIdx = Eigen::Index;

void refresh(const DenseMatrix& X, css::CssState& s) {
  const Matrix Xs = la::gather_columns(X, s.support);
  const Matrix XsX = Xs.transpose() * X.mat();
  s.coeff = s.inverse.inv() * XsX;
  s.residual = X.mat() - Xs * s.coeff;
  s.explained = XsX.cwiseProduct(s.coeff).sum();
}

css::CssReport to_report(const DenseMatrix& X, const css::CssState& s, Index swaps) {
  css::CssReport rep;
  std::vector<Index> order(s.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return s.support[a] < s.support[b]; });
  rep.coeff.resize(static_cast<EIdx>(s.size()), static_cast<EIdx>(X.cols()));
  for (Index i = 0; i < order.size(); ++i) {
    rep.support.push_back(s.support[order[i]]);
    rep.coeff.row(static_cast<EIdx>(i)) = s.coeff.row(static_cast<EIdx>(order[i]));
  }
  rep.relative_error = s.residual.norm() / X.mat().norm();
  rep.swaps = swaps;
  return rep;
}

}  // namespace

namespace css {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::ClassicGreedy: return "classic-greedy";
    case Variant::OptimalGreedy: return "optimal-greedy";
    case Variant::ClassicExchange: return "classic-exchange";
    case Variant::OptimalExchange: return "optimal-exchange";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::ClassicGreedy, Variant::OptimalGreedy, Variant::ClassicExchange, Variant::OptimalExchange})
    if (name == to_string(v)) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown CSS variant '" + std::string(name) + "'");
}

CssState css_fit(const DenseMatrix& X, std::span<const Index> S) {
  CssState s;
  s.support.assign(S.begin(), S.end());
  for (Index j : S)
    if (j >= X.cols()) throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j));
  const Matrix Xs = la::gather_columns(X, S);
  s.inverse = la::SpdInverse::from_gram(Xs.transpose() * Xs);
  refresh(X, s);
  return s;
}

CssState css_extend(const DenseMatrix& X, const CssState& state, Index j) {
  const Matrix Xs = la::gather_columns(X, state.support);
  const Vector u = Xs.transpose() * X.col(j);
  CssState s;
  s.inverse = la::forward_inverse_update(state.inverse, u, X.col(j).squaredNorm());
  s.support = state.support;
  s.support.push_back(j);
  refresh(X, s);
  return s;
}

namespace {

CssState greedy(const DenseMatrix& X, Index K, bool classic) {
  CssState s = css_fit(X, {});
  while (s.size() < K) {
    const std::vector<Index> cands = criteria::complement(X.cols(), s.support);
    const criteria::CriterionScores sc = criteria::css_selection(X, s, cands, classic);
    const std::size_t pos = sc.best_position();
    if (pos == criteria::CriterionScores::npos)
      throw Error(ErrorCode::SpanExhausted, "only " + std::to_string(s.size()) + " independent columns");
    try {
      s = css_extend(X, s, sc.indices[pos]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NearSingularBorder) throw;
      std::vector<Index> next = s.support;
      next.push_back(sc.indices[pos]);
      s = css_fit(X, next);
    }
  }
  return s;
}

Index exchange(const DenseMatrix& X, CssState& s, bool classic) {
  const Index K = s.size();
  const Index p = X.cols();
  const Index kmax = std::min(K, p - K);
  const double floor = 1e-12 * X.mat().squaredNorm();
  Index accepted = 0;
  for (int round = 0; round < 100; ++round) {
    const double L0 = s.residual.squaredNorm();
    const criteria::CriterionScores xi = criteria::css_elimination(X, s, classic);
    const std::vector<Index> outside = criteria::complement(p, s.support);
    const criteria::CriterionScores zeta = criteria::css_selection(X, s, outside, classic);
    const auto drop_rank = xi.ranked_positions();
    const auto add_rank = zeta.ranked_positions();
    double best_loss = L0;
    CssState best;
    bool improved = false;
    for (Index k = 1; k <= kmax; ++k) {
      if (zeta.scores[add_rank[k - 1]] == criteria::kExcluded) break;
      std::vector<char> dropped(K, 0);
      for (Index i = 0; i < k; ++i) dropped[drop_rank[i]] = 1;
      std::vector<Index> trial;
      for (Index i = 0; i < K; ++i)
        if (!dropped[i]) trial.push_back(s.support[i]);
      for (Index i = 0; i < k; ++i) trial.push_back(zeta.indices[add_rank[i]]);
      CssState t;
      try {
        t = css_fit(X, trial);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularGram) throw;
        continue;
      }
      const double L = t.residual.squaredNorm();
      if (L < best_loss) {
        best_loss = L;
        best = std::move(t);
        improved = true;
      }
    }
    if (!improved || L0 - best_loss <= floor) break;
    s = std::move(best);
    ++accepted;
  }
  return accepted;
}

}  // namespace

CssReport css_solve(const DenseMatrix& X, Index K, Variant variant) {
  if (K < 1 || K > X.cols()) throw Error(ErrorCode::InvalidArgument, "K must be in [1, p]");
  const bool classic = variant == Variant::ClassicGreedy || variant == Variant::ClassicExchange;
  CssState s = greedy(X, K, classic);
  Index swaps = 0;
  if (variant == Variant::ClassicExchange || variant == Variant::OptimalExchange) swaps = exchange(X, s, classic);
  return to_report(X, s, swaps);
}

CssReport leverage_score_baseline(const DenseMatrix& X, Index K, Index n_vectors) {
  const Index r = std::min(X.rows(), X.cols());
  if (n_vectors < 1 || n_vectors > r) throw Error(ErrorCode::InvalidArgument, "n_vectors must be in [1, min(n,p)]");
  if (K < 1 || K > X.cols()) throw Error(ErrorCode::InvalidArgument, "K must be in [1, p]");
  Eigen::BDCSVD<Matrix> svd(X.mat(), Eigen::ComputeThinV);
  const Matrix& V = svd.matrixV();
  std::vector<double> lev(X.cols());
  for (Index j = 0; j < X.cols(); ++j)
    lev[j] = V.row(static_cast<EIdx>(j)).head(static_cast<EIdx>(n_vectors)).squaredNorm();
  std::vector<Index> order(X.cols());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return lev[a] > lev[b]; });
  std::vector<Index> pick(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(K));
  std::sort(pick.begin(), pick.end());

  // Leverage picks may be dependent, so solve with a rank-revealing factorization.
  const Matrix Xs = la::gather_columns(X, pick);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Xs);
  CssReport rep;
  rep.support = pick;
  rep.coeff = cod.solve(X.mat());
  rep.relative_error = (X.mat() - Xs * rep.coeff).norm() / X.mat().norm();
  return rep;
}

double svd_rank_bound(const DenseMatrix& X, Index K) {
  const Vector sv = Eigen::BDCSVD<Matrix>(X.mat()).singularValues();
  double tail = 0.0;
  for (EIdx i = static_cast<EIdx>(K); i < sv.size(); ++i) tail += sv(i) * sv(i);
  return std::sqrt(tail) / X.mat().norm();
}

}  // namespace css

namespace criteria {

CriterionScores css_selection(const DenseMatrix& X, const css::CssState& state, std::span<const Index> candidates,
                              bool classic) {
  CriterionScores out{{candidates.begin(), candidates.end()}, std::vector<double>(candidates.size()),
                      Kind::CssSelect, classic};
  Vector diag(static_cast<EIdx>(candidates.size()));
  if (state.size() == 0) {
    for (std::size_t i = 0; i < candidates.size(); ++i)
      diag(static_cast<EIdx>(i)) = X.col(candidates[i]).squaredNorm();
  } else {
    kernels::projected_diag(X.mat(), la::gather_columns(X, state.support), state.inverse.inv(), candidates, diag);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Index j = candidates[i];
    const double nrm = X.col(j).squaredNorm();
    if (!(nrm > 0.0)) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");
    const double d = diag(static_cast<EIdx>(i));
    if (d <= kSpanTol * nrm) {
      out.scores[i] = kExcluded;
      continue;
    }
    const double num = (state.residual.transpose() * X.col(j)).squaredNorm();
    out.scores[i] = num / (classic ? nrm : d);
  }
  return out;
}

CriterionScores css_elimination(const DenseMatrix& X, const css::CssState& state, bool classic) {
  if (state.size() == 0) throw Error(ErrorCode::InvalidArgument, "elimination on an empty support");
  CriterionScores out{state.support, std::vector<double>(state.size()), Kind::CssEliminate, classic};
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double row = state.coeff.row(static_cast<EIdx>(i)).squaredNorm();
    if (classic) {
      out.scores[i] = X.col(state.support[i]).squaredNorm() * row;
    } else {
      const double cii = state.inverse(i, i);
      if (!(cii > la::kMinPivot)) throw Error(ErrorCode::DegeneratePivot, "C_ii = " + std::to_string(cii));
      out.scores[i] = state.explained - row / cii;
    }
  }
  return out;
}

CriterionScores css_elimination_sandwich(const DenseMatrix& X, const css::CssState& state) {
  if (state.size() == 0) throw Error(ErrorCode::InvalidArgument, "elimination on an empty support");
  const EIdx k = static_cast<EIdx>(state.size());
  const Matrix XsX = la::gather_columns(X, state.support).transpose() * X.mat();
  const Matrix& C = state.inverse.inv();
  CriterionScores out{state.support, std::vector<double>(state.size()), Kind::CssEliminate, false};
  for (EIdx j = 0; j < k; ++j) {
    Matrix P = Matrix::Identity(k, k);
    P(j, j) = 0.0;
    const Matrix inner = C - (C.col(j) * C.row(j)) / C(j, j);
    const Matrix M = P * XsX;
    out.scores[static_cast<std::size_t>(j)] = (M.transpose() * (P * inner * P) * M).trace();
  }
  return out;
}

}  // namespace criteria
}  // namespace optpursuit
