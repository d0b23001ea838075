#include <algorithm>
#include <string>

#include "optpursuit/kernels.hpp"
#include "solver_common.hpp"

namespace optpursuit::solvers {

namespace {
using EIdx = Eigen::Index;
}

SolveReport solve_cosa(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg) {
  const auto start = detail::Clock::now();
  detail::check_problem(X, y, cfg);
  const Index n = X.rows();
  const Index p = X.cols();
  const Index K = cfg.sparsity;
  if (K > p) throw Error(ErrorCode::InvalidArgument, "K exceeds p");
  const bool optimal = cfg.variant == Variant::Optimal;

  SolveReport rep;
  if (3 * K > n) rep.warnings.push_back("3K > n: merged support may exceed the sample count");
  // Omega size: 2K, clamped so that |S u Omega| <= n.
  Index omega = 2 * K;
  if (n > K && omega > n - K) {
    omega = n - K;
    rep.warnings.push_back("2K clamped to n-K=" + std::to_string(omega));
  }
  if (n <= K) omega = 1;

  Vector norms;
  kernels::column_sq_norms(X.mat(), norms);
  for (Index j = 0; j < p; ++j)
    if (!(norms(static_cast<EIdx>(j)) > 0.0))
      throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");

  la::SupportState state = la::least_squares_on_support(X, y, {});
  Vector beta_prev = Vector::Zero(static_cast<EIdx>(p));
  rep.residual_norms.push_back(state.residual.norm());
  Vector corr;

  for (Index k = 1; k <= cfg.max_iter; ++k) {
    // Identification: in-support indices keep the plain normalized correlation.
    kernels::correlations(X.mat(), state.residual, corr);
    std::vector<double> score(p);
    for (Index j = 0; j < p; ++j) {
      const EIdx e = static_cast<EIdx>(j);
      score[j] = corr(e) * corr(e) / norms(e);
    }
    if (optimal && state.size() > 0) {
      const std::vector<Index> out = criteria::complement(p, state.support);
      const criteria::CriterionScores opt = criteria::optimal_selection(X, state, out);
      for (std::size_t i = 0; i < out.size(); ++i) score[out[i]] = opt.scores[i];
    }
    std::vector<Index> order(p);
    for (Index j = 0; j < p; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return score[a] > score[b]; });

    std::vector<Index> merged = state.support;
    std::vector<char> in(p, 0);
    for (Index j : merged) in[j] = 1;
    for (Index i = 0, taken = 0; i < p && taken < omega; ++i) {
      const Index j = order[i];
      if (score[j] == criteria::kExcluded) break;
      ++taken;
      if (!in[j]) {
        in[j] = 1;
        merged.push_back(j);
      }
    }

    la::SupportState ustate;
    try {
      ustate = la::least_squares_on_support(X, y, merged);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("CoSa iteration ") + std::to_string(k) + ", |U|=" +
                                std::to_string(merged.size()) + ": " + e.what());
    }

    // Pruning: keep the K entries that are least removable under the elimination criterion.
    if (ustate.size() > K) {
      const criteria::CriterionScores elim = optimal ? criteria::optimal_elimination(X, y, ustate)
                                                     : criteria::wald_elimination(ustate, X);
      const std::vector<std::size_t> ranked = elim.ranked_positions();
      std::vector<Index> keep(ranked.end() - static_cast<std::ptrdiff_t>(K), ranked.end());
      state = la::restrict_support(X, y, ustate, keep);
    } else {
      state = std::move(ustate);
    }

    const Vector beta = state.dense_beta(p);
    const double rn = state.residual.norm();
    const double change = (beta - beta_prev).norm();
    beta_prev = beta;
    rep.iterations = k;
    rep.residual_norms.push_back(rn);
    rep.objective_trace.push_back(rn * rn);
    if (cfg.record_iterates) rep.iterates.push_back(beta);
    if (rn <= cfg.residual_tol || change <= cfg.variation_tol) break;
  }
  detail::finish(rep, state.support, state.beta, p, start);
  return rep;
}

}  // namespace optpursuit::solvers
