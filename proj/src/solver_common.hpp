#pragma once

#include <algorithm>
#include <chrono>

#include "optpursuit/solvers.hpp"

namespace optpursuit::solvers::detail {

using Clock = std::chrono::steady_clock;

inline Vector scatter(Index p, std::span<const Index> support, const Vector& beta_s) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(p));
  for (Index i = 0; i < support.size(); ++i)
    out(static_cast<Eigen::Index>(support[i])) = beta_s(static_cast<Eigen::Index>(i));
  return out;
}

inline void finish(SolveReport& rep, std::span<const Index> support, const Vector& beta_s, Index p,
                   Clock::time_point start) {
  rep.beta = scatter(p, support, beta_s);
  rep.support.assign(support.begin(), support.end());
  std::sort(rep.support.begin(), rep.support.end());
  rep.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
}

inline void check_problem(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg) {
  cfg.validate();
  if (static_cast<Index>(y.size()) != X.rows())
    throw Error(ErrorCode::DimensionMismatch, "y length does not match rows of X");
}

}  // namespace optpursuit::solvers::detail
