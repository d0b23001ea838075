#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optpursuit/kernels.hpp"
#include "solver_common.hpp"

namespace optpursuit::solvers {

namespace {

using EIdx = Eigen::Index;

std::string describe(std::span<const Index> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

std::vector<Index> initial_support(const DenseMatrix& X, const Vector& y, Index K) {
  const Index p = X.cols();
  if (K > p) throw Error(ErrorCode::InvalidArgument, "K exceeds p");
  Vector corr, norms;
  kernels::correlations(X.mat(), y, corr);
  kernels::column_sq_norms(X.mat(), norms);
  std::vector<double> score(p);
  for (Index j = 0; j < p; ++j) {
    const EIdx e = static_cast<EIdx>(j);
    if (!(norms(e) > 0.0)) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");
    score[j] = std::abs(corr(e)) / std::sqrt(norms(e));
  }
  std::vector<Index> order(p);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return score[a] > score[b]; });
  std::vector<Index> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(K));
  std::sort(out.begin(), out.end());
  return out;
}

SolveReport solve_bess(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg) {
  const auto start = detail::Clock::now();
  detail::check_problem(X, y, cfg);
  const Index n = X.rows();
  const Index p = X.cols();
  const Index K = cfg.sparsity;
  if (K > std::min(n, p)) throw Error(ErrorCode::InvalidArgument, "K exceeds min(n, p)");
  const bool optimal = cfg.variant == Variant::Optimal;
  const double tau = cfg.splicing_threshold >= 0 ? cfg.splicing_threshold : 0.01 * y.squaredNorm() / n;
  const Index kmax = std::min(cfg.splicing_kmax == 0 ? K : cfg.splicing_kmax, std::min(K, p - K));
  const auto loss = [n](const la::SupportState& s) { return s.residual.squaredNorm() / (2.0 * n); };

  la::SupportState state = la::least_squares_on_support(X, y, initial_support(X, y, K));
  SolveReport rep;
  rep.residual_norms.push_back(y.norm());
  rep.residual_norms.push_back(state.residual.norm());
  rep.objective_trace.push_back(state.residual.squaredNorm());

  for (Index round = 0; round < cfg.max_iter; ++round) {
    ++rep.iterations;
    const double L0 = loss(state);
    const criteria::CriterionScores xi =
        optimal ? criteria::optimal_elimination(X, y, state) : criteria::wald_elimination(state, X);
    const std::vector<Index> outside = criteria::complement(p, state.support);
    const criteria::CriterionScores zeta = optimal ? criteria::optimal_selection(X, state, outside)
                                                   : criteria::corr_selection(X, state, outside);
    const std::vector<std::size_t> drop_rank = xi.ranked_positions();
    const std::vector<std::size_t> add_rank = zeta.ranked_positions();

    double best_loss = L0;
    la::SupportState best;
    bool improved = false;
    for (Index k = 1; k <= kmax; ++k) {
      if (zeta.scores[add_rank[k - 1]] == criteria::kExcluded) break;
      std::vector<char> dropped(state.size(), 0);
      for (Index i = 0; i < k; ++i) dropped[drop_rank[i]] = 1;
      std::vector<Index> keep;
      for (Index i = 0; i < state.size(); ++i)
        if (!dropped[i]) keep.push_back(i);
      la::SupportState trial = la::restrict_support(X, y, state, keep);
      for (Index i = 0; i < k; ++i) {
        const Index j = zeta.indices[add_rank[i]];
        try {
          trial = la::add_to_support(X, y, trial, j);
        } catch (const Error& e) {
          std::vector<Index> cand = trial.support;
          cand.push_back(j);
          throw Error(e.code(), "splicing candidate support " + describe(cand) + ": " + e.what());
        }
      }
      const double L = loss(trial);
      if (L < best_loss) {
        best_loss = L;
        best = std::move(trial);
        improved = true;
      }
    }
    if (!improved || L0 - best_loss < tau) break;
    state = std::move(best);
    const double rn = state.residual.norm();
    rep.residual_norms.push_back(rn);
    rep.objective_trace.push_back(rn * rn);
    if (cfg.record_iterates) rep.iterates.push_back(state.dense_beta(p));
  }
  detail::finish(rep, state.support, state.beta, p, start);
  return rep;
}

}  // namespace optpursuit::solvers
