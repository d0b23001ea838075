#include <cmath>
#include <string>

#include "solver_common.hpp"

namespace optpursuit::solvers {

double gradient_step(const DenseMatrix& X, std::span<const Index> support, Vector& beta, Vector& residual) {
  if (static_cast<Index>(beta.size()) != support.size())
    throw Error(ErrorCode::DimensionMismatch, "beta length does not match support");
  const Matrix Xs = la::gather_columns(X, support);
  const Vector g = -(Xs.transpose() * residual);
  const double gg = g.squaredNorm();
  if (gg == 0.0) return 0.0;
  const Vector d = Xs * g;
  const double dd = d.squaredNorm();
  if (dd == 0.0) return 0.0;
  const double alpha = gg / dd;
  beta -= alpha * g;
  residual += alpha * d;
  return alpha;
}

SolveReport solve_gp(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg) {
  const auto start = detail::Clock::now();
  detail::check_problem(X, y, cfg);
  const Index p = X.cols();
  if (cfg.sparsity > std::min(X.rows(), p)) throw Error(ErrorCode::InvalidArgument, "K exceeds min(n, p)");
  const bool optimal = cfg.variant == Variant::Optimal;

  std::vector<Index> support;
  Vector beta_s(0);
  Vector r = y;
  std::vector<char> in(p, 0);
  SolveReport rep;
  rep.residual_norms.push_back(r.norm());

  while (rep.iterations < cfg.max_iter && rep.residual_norms.back() > cfg.residual_tol) {
    const bool can_add = support.size() < cfg.sparsity;
    const bool can_reupdate = cfg.ogp_reupdate && optimal && !support.empty();
    if (!can_add && !can_reupdate) break;

    bool add = can_add;
    Index chosen = p;
    if (can_add) {
      std::vector<Index> cands;
      cands.reserve(p - support.size());
      for (Index j = 0; j < p; ++j)
        if (!in[j]) cands.push_back(j);
      criteria::CriterionScores sc;
      try {
        sc = optimal ? criteria::ogp_selection(X, support, r, cands) : criteria::corr_selection(X, r, cands);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroDenominator) break;  // r is orthogonal to everything left
        throw;
      }
      const std::size_t pos = sc.best_position();
      if (pos == criteria::CriterionScores::npos) break;
      chosen = sc.indices[pos];
      if (can_reupdate) {
        const Matrix Xs = la::gather_columns(X, support);
        const Vector a = Xs.transpose() * r;
        const double den = (Xs * a).norm();
        const double stay = den > 0.0 ? a.squaredNorm() / den + cfg.ogp_tau : criteria::kExcluded;
        if (stay >= sc.scores[pos]) add = false;
      }
    }
    if (add) {
      in[chosen] = 1;
      support.push_back(chosen);
      rep.path.push_back(chosen);
      beta_s.conservativeResize(static_cast<Eigen::Index>(support.size()));
      beta_s(static_cast<Eigen::Index>(support.size() - 1)) = 0.0;
    }
    const double alpha = gradient_step(X, support, beta_s, r);
    ++rep.iterations;
    const double rn = r.norm();
    rep.residual_norms.push_back(rn);
    rep.objective_trace.push_back(rn * rn);
    if (cfg.record_iterates) rep.iterates.push_back(detail::scatter(p, support, beta_s));
    if (alpha == 0.0) break;  // zero gradient: converged on this support
  }
  detail::finish(rep, support, beta_s, p, start);
  return rep;
}

}  // namespace optpursuit::solvers
