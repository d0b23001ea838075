#include "optpursuit/kernels.hpp"

#include <omp.h>

namespace optpursuit::kernels {

namespace {

using EIdx = Eigen::Index;

int g_threads = 0;

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr double kParallelWork = 1 << 16;

bool go_parallel(double work) {
  return work >= kParallelWork && !omp_in_parallel() && num_threads() > 1;
}

}  // namespace

void set_num_threads(int n) { g_threads = n < 0 ? 0 : n; }
int num_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

namespace serial {

void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, Eigen::VectorXd& out) {
  out.resize(X.cols());
  for (EIdx j = 0; j < X.cols(); ++j) {
    double acc = 0.0;
    for (EIdx i = 0; i < X.rows(); ++i) acc += X(i, j) * r(i);
    out(j) = acc;
  }
}

void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, std::span<const Index> cols,
                  Eigen::VectorXd& out) {
  out.resize(static_cast<EIdx>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const EIdx j = static_cast<EIdx>(cols[c]);
    double acc = 0.0;
    for (EIdx i = 0; i < X.rows(); ++i) acc += X(i, j) * r(i);
    out(static_cast<EIdx>(c)) = acc;
  }
}

void column_sq_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out) {
  out.resize(X.cols());
  for (EIdx j = 0; j < X.cols(); ++j) {
    double acc = 0.0;
    for (EIdx i = 0; i < X.rows(); ++i) acc += X(i, j) * X(i, j);
    out(j) = acc;
  }
}

void projected_diag(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& C,
                    std::span<const Index> cols, Eigen::VectorXd& out) {
  const EIdx k = Xs.cols();
  out.resize(static_cast<EIdx>(cols.size()));
  std::vector<double> g(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const EIdx j = static_cast<EIdx>(cols[c]);
    double nrm = 0.0;
    for (EIdx i = 0; i < X.rows(); ++i) nrm += X(i, j) * X(i, j);
    for (EIdx a = 0; a < k; ++a) {
      double acc = 0.0;
      for (EIdx i = 0; i < X.rows(); ++i) acc += Xs(i, a) * X(i, j);
      g[static_cast<std::size_t>(a)] = acc;
    }
    double quad = 0.0;
    for (EIdx a = 0; a < k; ++a)
      for (EIdx b = 0; b < k; ++b) quad += g[static_cast<std::size_t>(a)] * C(a, b) * g[static_cast<std::size_t>(b)];
    out(static_cast<EIdx>(c)) = nrm - quad;
  }
}

}  // namespace serial

namespace omp {

void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, Eigen::VectorXd& out) {
  const EIdx p = X.cols();
  out.resize(p);
  const bool par = go_parallel(static_cast<double>(X.rows()) * static_cast<double>(p));
#pragma omp parallel for schedule(static) if (par) num_threads(num_threads())
  for (EIdx j = 0; j < p; ++j) out(j) = X.col(j).dot(r);
}

void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, std::span<const Index> cols,
                  Eigen::VectorXd& out) {
  const EIdx m = static_cast<EIdx>(cols.size());
  out.resize(m);
  const bool par = go_parallel(static_cast<double>(X.rows()) * static_cast<double>(m));
#pragma omp parallel for schedule(static) if (par) num_threads(num_threads())
  for (EIdx c = 0; c < m; ++c) out(c) = X.col(static_cast<EIdx>(cols[static_cast<std::size_t>(c)])).dot(r);
}

void column_sq_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out) {
  const EIdx p = X.cols();
  out.resize(p);
  const bool par = go_parallel(static_cast<double>(X.rows()) * static_cast<double>(p));
#pragma omp parallel for schedule(static) if (par) num_threads(num_threads())
  for (EIdx j = 0; j < p; ++j) out(j) = X.col(j).squaredNorm();
}

void projected_diag(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& C,
                    std::span<const Index> cols, Eigen::VectorXd& out) {
  const EIdx m = static_cast<EIdx>(cols.size());
  out.resize(m);
  if (m == 0) return;
  // Blocked: G = Xs^T X_cols via GEMM, then per-column quadratic forms.
  Eigen::MatrixXd Xc(X.rows(), m);
  for (EIdx c = 0; c < m; ++c) Xc.col(c) = X.col(static_cast<EIdx>(cols[static_cast<std::size_t>(c)]));
  const Eigen::MatrixXd G = Xs.transpose() * Xc;
  const Eigen::MatrixXd CG = C * G;
  const bool par = go_parallel(static_cast<double>(X.rows() + Xs.cols()) * static_cast<double>(m));
#pragma omp parallel for schedule(static) if (par) num_threads(num_threads())
  for (EIdx c = 0; c < m; ++c) out(c) = Xc.col(c).squaredNorm() - G.col(c).dot(CG.col(c));
}

}  // namespace omp

void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, Eigen::VectorXd& out) {
  omp::correlations(X, r, out);
}
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, std::span<const Index> cols,
                  Eigen::VectorXd& out) {
  omp::correlations(X, r, cols, out);
}
void column_sq_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out) { omp::column_sq_norms(X, out); }
void projected_diag(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& C,
                    std::span<const Index> cols, Eigen::VectorXd& out) {
  omp::projected_diag(X, Xs, C, cols, out);
}

}  // namespace optpursuit::kernels
