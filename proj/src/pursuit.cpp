#include <cmath>
#include <string>

#include "optpursuit/kernels.hpp"
#include "solver_common.hpp"

namespace optpursuit::solvers {

namespace {
using EIdx = Eigen::Index;
}

void SolverConfig::validate() const {
  if (sparsity < 1) throw Error(ErrorCode::InvalidArgument, "sparsity K must be >= 1");
  if (residual_tol < 0 || variation_tol < 0) throw Error(ErrorCode::InvalidArgument, "tolerances must be >= 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
}

SolveReport solve_pursuit(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg) {
  const auto start = detail::Clock::now();
  detail::check_problem(X, y, cfg);
  const Index p = X.cols();
  if (cfg.sparsity > std::min(X.rows(), p))
    throw Error(ErrorCode::InvalidArgument, "K exceeds min(n, p)");
  const bool optimal = cfg.variant == Variant::Optimal;

  Vector norms;
  kernels::column_sq_norms(X.mat(), norms);
  for (Index j = 0; j < p; ++j)
    if (!(norms(static_cast<EIdx>(j)) > 0.0))
      throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");

  // Projected energies x_j^T (I - H) x_j, downdated by one rank-one term per added column.
  Vector proj = norms;
  std::vector<char> blocked(p, 0);  // in support, or rejected as numerically dependent

  la::SupportState state = la::least_squares_on_support(X, y, {});
  SolveReport rep;
  rep.residual_norms.push_back(state.residual.norm());

  Vector corr, qx;
  while (state.size() < cfg.sparsity && rep.residual_norms.back() > cfg.residual_tol) {
    kernels::correlations(X.mat(), state.residual, corr);
    Index best = p;
    double best_score = criteria::kExcluded;
    for (Index j = 0; j < p; ++j) {
      if (blocked[j]) continue;
      const EIdx e = static_cast<EIdx>(j);
      double s;
      if (optimal) {
        if (proj(e) <= criteria::kSpanTol * norms(e)) continue;
        s = corr(e) * corr(e) / proj(e);
      } else {
        s = corr(e) * corr(e) / norms(e);
      }
      if (s > best_score) {  // strict: lowest index wins ties
        best_score = s;
        best = j;
      }
    }
    if (best == p)
      throw Error(ErrorCode::NoSelectableCandidate,
                  "no selectable candidate at |S|=" + std::to_string(state.size()));

    Vector q;
    double t = 0.0;
    if (optimal) {
      const Matrix Xs = la::gather_columns(X, state.support);
      const Vector u = Xs.transpose() * X.col(best);
      q = X.col(best) - Xs * (state.inverse.inv() * u);
      t = q.squaredNorm();
    }
    try {
      state = la::add_to_support(X, y, state, best);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularGram) throw;
      blocked[best] = 1;
      rep.warnings.push_back("column " + std::to_string(best) + " skipped: dependent on support");
      continue;
    }
    blocked[best] = 1;
    rep.path.push_back(best);
    if (optimal) {
      if (state.size() % la::kRefactorEvery == 0) {
        std::vector<Index> all(p);
        for (Index j = 0; j < p; ++j) all[j] = j;
        proj = la::projected_gram_diag(X, state, all);
      } else if (t > 0.0) {
        kernels::correlations(X.mat(), q, qx);
        proj -= qx.cwiseAbs2() / t;
      }
    }
    ++rep.iterations;
    const double rn = state.residual.norm();
    rep.residual_norms.push_back(rn);
    rep.objective_trace.push_back(rn * rn);
    if (cfg.record_iterates) rep.iterates.push_back(state.dense_beta(p));
  }
  detail::finish(rep, state.support, state.beta, p, start);
  return rep;
}

}  // namespace optpursuit::solvers
