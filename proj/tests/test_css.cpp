#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "optpursuit/css.hpp"
#include "test_util.hpp"

using namespace optpursuit;
using namespace testutil;
using css::Variant;

namespace {

DenseMatrix low_rank(Index n, Index p, Index r, double noise, std::uint64_t seed) {
  const Matrix U = gaussian(n, r, seed).mat();
  const Matrix V = gaussian(r, p, seed + 1).mat();
  return DenseMatrix(U * V + noise * gaussian(n, p, seed + 2).mat());
}

// Frobenius error of the best reconstruction from columns S, by pivoted QR.
double fro_error(const DenseMatrix& X, const std::vector<Index>& S) {
  const Matrix Xs = la::gather_columns(X, S);
  const Matrix B = Xs.colPivHouseholderQr().solve(X.mat());
  return (X.mat() - Xs * B).squaredNorm();
}

}  // namespace

TEST(CssState, Invariants) {
  const DenseMatrix X = gaussian(12, 9, 3);
  const std::vector<Index> S = {2, 5, 7};
  const auto st = css::css_fit(X, S);
  const Matrix Xs = la::gather_columns(X, S);
  const Matrix B = (Xs.transpose() * Xs).ldlt().solve(Xs.transpose() * X.mat());
  EXPECT_LT((st.coeff - B).norm(), 1e-8 * B.norm());
  EXPECT_NEAR(X.mat().squaredNorm(), st.explained + st.residual.squaredNorm(), 1e-7 * X.mat().squaredNorm());
  const auto grown = css::css_extend(X, st, 0);
  const std::vector<Index> S2 = {2, 5, 7, 0};
  const auto fresh = css::css_fit(X, S2);
  EXPECT_LT((grown.coeff - fresh.coeff).norm(), 1e-8 * fresh.coeff.norm());
}

TEST(CssCriteria, SelectionMatchesExhaustiveAddition) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const DenseMatrix X = gaussian(15, 10, 40 + seed);
    const std::vector<Index> S = {static_cast<Index>(seed % 10), static_cast<Index>((seed + 3) % 10)};
    const auto st = css::css_fit(X, S);
    const auto cands = criteria::complement(10, S);
    const auto sc = criteria::css_selection(X, st, cands);
    double best = 1e300;
    Index arg = 0;
    for (Index j : cands) {
      auto T = S;
      T.push_back(j);
      const double e = fro_error(X, T);
      if (e < best - 1e-12) {
        best = e;
        arg = j;
      }
    }
    EXPECT_EQ(sc.best_index(), arg) << "seed " << seed;
    EXPECT_NEAR(st.residual.squaredNorm() - sc.scores[sc.best_position()], best, 1e-8 * X.mat().squaredNorm());
  }
}

TEST(CssCriteria, EliminationShortcutMatchesSandwichAndRefit) {
  const DenseMatrix X = gaussian(14, 8, 5);
  const std::vector<Index> S = {0, 3, 4, 6};
  const auto st = css::css_fit(X, S);
  const auto a = criteria::css_elimination(X, st);
  const auto b = criteria::css_elimination_sandwich(X, st);
  for (std::size_t i = 0; i < S.size(); ++i) {
    EXPECT_NEAR(a.scores[i], b.scores[i], 1e-9 * X.mat().squaredNorm());
    auto rest = S;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    EXPECT_NEAR(a.scores[i], X.mat().squaredNorm() - fro_error(X, rest), 1e-8 * X.mat().squaredNorm());
  }
  const auto c = criteria::css_elimination(X, st, true);
  EXPECT_TRUE(c.drops_by_min());
}

TEST(CssSolve, OrthogonalColumnsRankByEnergy) {
  const DenseMatrix Q = orthogonal(10, 5, 8);
  for (Variant v : {Variant::OptimalGreedy, Variant::ClassicGreedy}) {
    const auto rep = css::css_solve(Q, 2, v);
    const std::vector<Index> top = {3, 4};  // largest norms by construction
    EXPECT_EQ(rep.support, top);
  }
}

TEST(CssSolve, DuplicateColumnNeverTwice) {
  Matrix m = gaussian(8, 3, 9).mat();
  m.col(1) = m.col(0);
  m.col(0) *= 3.0;
  m.col(1) *= 3.0;
  const DenseMatrix X(m);
  for (Variant v : {Variant::OptimalGreedy, Variant::ClassicGreedy, Variant::OptimalExchange}) {
    const auto rep = css::css_solve(X, 2, v);
    const bool both = std::find(rep.support.begin(), rep.support.end(), 0) != rep.support.end() &&
                      std::find(rep.support.begin(), rep.support.end(), 1) != rep.support.end();
    EXPECT_FALSE(both);
  }
}

TEST(CssSolve, SpanExhausted) {
  const Matrix u = gaussian(6, 1, 1).mat();
  const Matrix v = gaussian(1, 4, 2).mat();
  const DenseMatrix X(u * v);
  try {
    css::css_solve(X, 2, Variant::OptimalGreedy);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpanExhausted);
  }
}

TEST(CssSolve, BoundsAndExchangeOrdering) {
  int optimal_wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    // the selection budget is half the rank, so no subset reaches the noise floor
    const DenseMatrix X = low_rank(60, 40, 10, 0.1, 1000 + 3 * seed);
    const double bound = css::svd_rank_bound(X, 5);
    const auto og = css::css_solve(X, 5, Variant::OptimalGreedy);
    const auto cg = css::css_solve(X, 5, Variant::ClassicGreedy);
    const auto oe = css::css_solve(X, 5, Variant::OptimalExchange);
    const auto ce = css::css_solve(X, 5, Variant::ClassicExchange);
    for (const auto* r : {&og, &cg, &oe, &ce}) EXPECT_GE(r->relative_error, bound - 1e-10);
    EXPECT_LE(oe.relative_error, og.relative_error + 1e-12);
    EXPECT_LE(ce.relative_error, cg.relative_error + 1e-12);
    if (og.relative_error <= cg.relative_error + 1e-12) ++optimal_wins;
  }
  EXPECT_GE(optimal_wins, 80);
}

TEST(Leverage, OrthogonalFollowsNorms) {
  const DenseMatrix Q = orthogonal(10, 5, 8);
  const auto rep = css::leverage_score_baseline(Q, 5, 5);
  EXPECT_EQ(rep.support.size(), 5u);
  // with all right singular vectors every column has leverage 1; ties go to lowest index
  const auto two = css::leverage_score_baseline(Q, 2, 2);
  const std::vector<Index> top = {3, 4};
  EXPECT_EQ(two.support, top);
}

TEST(Leverage, RankKRecoversColumnSpace) {
  const DenseMatrix X = low_rank(20, 12, 3, 0.0, 77);
  const auto rep = css::leverage_score_baseline(X, 3, 3);
  EXPECT_LT(rep.relative_error, 1e-8);
  const DenseMatrix Y = low_rank(20, 12, 3, 0.1, 78);
  EXPECT_GE(css::leverage_score_baseline(Y, 3, 3).relative_error, css::svd_rank_bound(Y, 3) - 1e-10);
}

TEST(SvdBound, KnownValues) {
  EXPECT_LT(css::svd_rank_bound(low_rank(10, 8, 2, 0.0, 4), 2), 1e-10);
  const DenseMatrix I(Matrix::Identity(6, 6));
  EXPECT_NEAR(css::svd_rank_bound(I, 2), std::sqrt(4.0 / 6.0), 1e-12);
  const DenseMatrix X = gaussian(9, 7, 10);
  Eigen::JacobiSVD<Matrix> svd(X.mat(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix trunc = svd.matrixU().leftCols(3) * svd.singularValues().head(3).asDiagonal() *
                       svd.matrixV().leftCols(3).transpose();
  EXPECT_NEAR(css::svd_rank_bound(X, 3), (X.mat() - trunc).norm() / X.mat().norm(), 1e-10);
}
