#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "optpursuit/criteria.hpp"
#include "optpursuit/densela.hpp"

namespace optpursuit::solvers {

enum class Variant { Classical, Optimal };

struct SolverConfig {
  Index sparsity = 1;              // K
  double residual_tol = 1e-10;     // stop once ||r|| <= residual_tol (eps, eps1)
  double variation_tol = 1e-10;    // CoSa family: stop once ||beta^k - beta^{k-1}|| <= variation_tol
  Index max_iter = 100;
  Index splicing_kmax = 0;         // 0 means K
  double splicing_threshold = -1;  // negative means 0.01 ||y||^2 / n
  Variant variant = Variant::Optimal;
  // Gradient-pursuit re-update without adding a feature, gated by ogp_tau.
  bool ogp_reupdate = false;
  double ogp_tau = 0.0;
  bool record_iterates = false;

  void validate() const;
};

struct SolveReport {
  std::vector<Index> support;             // ascending
  std::vector<Index> path;                // selection order for the select-only families
  Vector beta;                            // length p, zero off support
  std::vector<double> residual_norms;     // entry 0 is ||y||, then one per iteration
  std::vector<double> objective_trace;    // squared residual norm per iteration (per accepted splice for BESS)
  Index iterations = 0;
  std::chrono::nanoseconds wall_time{0};
  std::vector<Vector> iterates;           // dense beta per iteration when record_iterates
  std::vector<std::string> warnings;
};

// OMP (Classical) / OP (Optimal).
SolveReport solve_pursuit(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg);

// CoSaMP (Classical) / CoSaOP (Optimal).
SolveReport solve_cosa(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg);

// BESS (Classical) / OP-BESS (Optimal), fixed sparsity with splicing.
SolveReport solve_bess(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg);

// GP (Classical) / OGP (Optimal).
SolveReport solve_gp(const DenseMatrix& X, const Vector& y, const SolverConfig& cfg);

// One exact-line-search gradient step on `support` from (beta over support, residual).
// Updates beta and residual in place; returns the step size (0 for a zero gradient).
double gradient_step(const DenseMatrix& X, std::span<const Index> support, Vector& beta, Vector& residual);

// Top-K indices by |x_j^T y| / ||x_j||, lowest index first on ties; returned ascending.
std::vector<Index> initial_support(const DenseMatrix& X, const Vector& y, Index K);

}  // namespace optpursuit::solvers
