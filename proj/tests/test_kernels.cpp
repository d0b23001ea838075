#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "optpursuit/kernels.hpp"
#include "test_util.hpp"

using namespace optpursuit;
using namespace testutil;

namespace {

struct ThreadGuard {
  int saved = kernels::num_threads();
  explicit ThreadGuard(int n) { kernels::set_num_threads(n); }
  ~ThreadGuard() { kernels::set_num_threads(saved); }
};

}  // namespace

TEST(Kernels, CorrelationsSerialEqualsParallel) {
  ThreadGuard g(4);
  const Matrix X = gaussian(300, 2000, 1).mat();
  const Vector r = gaussian_vec(300, 2);
  Vector a, b;
  kernels::serial::correlations(X, r, a);
  kernels::omp::correlations(X, r, b);
  ASSERT_EQ(a.size(), 2000);
  EXPECT_LT((a - b).norm(), 1e-12 * a.norm());
  EXPECT_LT((a - X.transpose() * r).norm(), 1e-9 * a.norm());

  std::vector<kernels::Index> cols = {5, 17, 1999, 0, 640};
  kernels::serial::correlations(X, r, cols, a);
  kernels::omp::correlations(X, r, cols, b);
  EXPECT_LT((a - b).norm(), 1e-12 * a.norm());
  for (std::size_t k = 0; k < cols.size(); ++k)
    EXPECT_NEAR(a(static_cast<Eigen::Index>(k)), X.col(static_cast<Eigen::Index>(cols[k])).dot(r), 1e-10);
}

TEST(Kernels, ColumnNormsSerialEqualsParallel) {
  ThreadGuard g(3);
  const Matrix X = gaussian(50, 777, 3).mat();
  Vector a, b;
  kernels::serial::column_sq_norms(X, a);
  kernels::omp::column_sq_norms(X, b);
  EXPECT_LT((a - b).norm(), 1e-13 * a.norm());
  EXPECT_LT((a - X.colwise().squaredNorm().transpose()).norm(), 1e-10 * a.norm());
}

TEST(Kernels, ProjectedDiagSerialEqualsParallel) {
  ThreadGuard g(4);
  const DenseMatrix X = gaussian(120, 600, 4);
  std::vector<Index> S = {3, 50, 99, 120, 400};
  const Matrix Xs = la::gather_columns(X, S);
  const Matrix C = (Xs.transpose() * Xs).inverse();
  std::vector<kernels::Index> cols(600);
  std::iota(cols.begin(), cols.end(), 0);
  Vector a, b;
  kernels::serial::projected_diag(X.mat(), Xs, C, cols, a);
  kernels::omp::projected_diag(X.mat(), Xs, C, cols, b);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10 * a.maxCoeff());
  const Matrix P = Matrix::Identity(120, 120) - Xs * C * Xs.transpose();
  for (Eigen::Index j : {0, 3, 7, 599}) {
    const double ref = X.mat().col(j).dot(P * X.mat().col(j));
    EXPECT_NEAR(a(j), ref, 1e-8 * X.mat().col(j).squaredNorm());
  }
  EXPECT_NEAR(a(3), 0.0, 1e-8);
}

TEST(Kernels, ThreadCountDoesNotChangeBits) {
  const DenseMatrix X = gaussian(200, 3000, 5);
  const Vector r = gaussian_vec(200, 6);
  const std::vector<Index> S = {1, 2, 500};
  const Matrix Xs = la::gather_columns(X, S);
  const Matrix C = (Xs.transpose() * Xs).inverse();
  std::vector<kernels::Index> cols(3000);
  std::iota(cols.begin(), cols.end(), 0);
  Vector c1, c4, d1, d4, n1, n4;
  {
    ThreadGuard g(1);
    kernels::correlations(X.mat(), r, c1);
    kernels::projected_diag(X.mat(), Xs, C, cols, d1);
    kernels::column_sq_norms(X.mat(), n1);
  }
  {
    ThreadGuard g(4);
    kernels::correlations(X.mat(), r, c4);
    kernels::projected_diag(X.mat(), Xs, C, cols, d4);
    kernels::column_sq_norms(X.mat(), n4);
  }
  EXPECT_EQ(c1, c4);
  EXPECT_EQ(d1, d4);
  EXPECT_EQ(n1, n4);
}

TEST(Kernels, ThreadSetting) {
  ThreadGuard g(2);
  EXPECT_EQ(kernels::num_threads(), 2);
}
