#pragma once

// Column-parallel inner loops shared by the criteria. Each kernel has a plain
// serial reference (kept for tests and the benchmark) and an OpenMP version;
// the unqualified entry points dispatch to the OpenMP version, which falls back
// to a single thread for small problems or when already inside a parallel region.

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace optpursuit::kernels {

using Index = std::size_t;

namespace serial {
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, Eigen::VectorXd& out);
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, std::span<const Index> cols,
                  Eigen::VectorXd& out);
void column_sq_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out);
void projected_diag(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& C,
                    std::span<const Index> cols, Eigen::VectorXd& out);
}  // namespace serial

namespace omp {
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, Eigen::VectorXd& out);
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, std::span<const Index> cols,
                  Eigen::VectorXd& out);
void column_sq_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out);
void projected_diag(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& C,
                    std::span<const Index> cols, Eigen::VectorXd& out);
}  // namespace omp

// out = X^T r
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, Eigen::VectorXd& out);
// out[i] = X_{cols[i]}^T r
void correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& r, std::span<const Index> cols,
                  Eigen::VectorXd& out);
void column_sq_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out);
// out[i] = x^T x - (Xs^T x)^T C (Xs^T x) with x = X_{cols[i]}; not clamped.
void projected_diag(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& C,
                    std::span<const Index> cols, Eigen::VectorXd& out);

// Thread count used by the OpenMP kernels (0 = runtime default).
void set_num_threads(int n);
int num_threads();

}  // namespace optpursuit::kernels
