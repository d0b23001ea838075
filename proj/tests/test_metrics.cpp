#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "optpursuit/metrics.hpp"
#include "test_util.hpp"

using namespace optpursuit;
using namespace optpursuit::metrics;

TEST(Nmse, Examples) {
  const Vector b{{1.0, -2.0, 0.5}};
  EXPECT_EQ(nmse(b, b), 0.0);
  EXPECT_DOUBLE_EQ(nmse(Vector::Zero(3), b), 1.0);
  EXPECT_DOUBLE_EQ(nmse(2.0 * b, b), 1.0);
  try {
    nmse(b, Vector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroTruth);
  }
}

TEST(ExactRecovery, Examples) {
  const std::vector<Index> a = {1, 4, 7}, shuffled = {7, 1, 4}, sup = {1, 4, 7, 9}, none;
  EXPECT_TRUE(exact_recovery(a, shuffled));
  EXPECT_FALSE(exact_recovery(sup, a));
  EXPECT_FALSE(exact_recovery(a, sup));
  EXPECT_TRUE(exact_recovery(none, none));
}

TEST(RSquared, Examples) {
  const Vector y{{1.0, 3.0, 2.0, 6.0}};
  EXPECT_DOUBLE_EQ(r_squared(y, y), 1.0);
  EXPECT_NEAR(r_squared(y, Vector::Constant(4, y.mean())), 0.0, 1e-15);
  try {
    r_squared(Vector::Constant(3, 2.0), Vector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConstantTarget);
  }
  const Vector a = testutil::gaussian_vec(17, 3), b = testutil::gaussian_vec(17, 4);
  double mean = 0, ss_res = 0, ss_tot = 0;
  for (Eigen::Index i = 0; i < 17; ++i) mean += a(i);
  mean /= 17;
  for (Eigen::Index i = 0; i < 17; ++i) {
    ss_res += (a(i) - b(i)) * (a(i) - b(i));
    ss_tot += (a(i) - mean) * (a(i) - mean);
  }
  EXPECT_NEAR(r_squared(a, b), 1.0 - ss_res / ss_tot, 1e-12);
  EXPECT_LE(r_squared(a, b), 1.0);
}

TEST(PredError, Examples) {
  const Vector y = testutil::gaussian_vec(11, 5);
  EXPECT_EQ(pred_error(y, y), 0.0);
  EXPECT_NEAR(pred_error(y, y.array() + 0.3), 0.09, 1e-14);
  const Vector r = y - testutil::gaussian_vec(11, 6);
  const Vector c = r.array() - r.mean();
  EXPECT_NEAR(pred_error(y, y - r), c.squaredNorm() / 11 + r.mean() * r.mean(), 1e-12);
}

TEST(Metrics, PermutationInvariant) {
  const Vector y = testutil::gaussian_vec(9, 1), h = testutil::gaussian_vec(9, 2);
  Eigen::PermutationMatrix<Eigen::Dynamic> P(9);
  P.setIdentity();
  std::reverse(P.indices().data(), P.indices().data() + 9);
  EXPECT_NEAR(r_squared(P * y, P * h), r_squared(y, h), 1e-12);
  EXPECT_NEAR(pred_error(P * y, P * h), pred_error(y, h), 1e-14);
  EXPECT_NEAR(nmse(P * h, P * y), nmse(h, y), 1e-14);
}

TEST(KFold, SizesAndDeterminism) {
  for (Index n : {10u, 23u, 101u}) {
    const auto f = kfold_assignment(n, 5, 9);
    ASSERT_EQ(f.size(), n);
    std::vector<Index> counts(5, 0);
    for (int k : f) ++counts.at(static_cast<std::size_t>(k));
    for (int k = 0; k < 5; ++k) {
      const Index expect = n / 5 + (static_cast<Index>(k) < n % 5 ? 1 : 0);
      EXPECT_EQ(counts[static_cast<std::size_t>(k)], expect);
    }
    EXPECT_EQ(f, kfold_assignment(n, 5, 9));
  }
  EXPECT_NE(kfold_assignment(50, 5, 1), kfold_assignment(50, 5, 2));
}

TEST(CrossValidate, ExactModelGivesPerfectFit) {
  const DenseMatrix X = testutil::gaussian(40, 3, 11);
  const Vector y = X.mat() * Vector{{1.0, -2.0, 0.5}};
  const auto fit = [](const DenseMatrix& Xt, const Vector& yt) -> Vector {
    return Xt.mat().colPivHouseholderQr().solve(yt);
  };
  const auto cv = cross_validate(X, y, fit, 5, 3);
  ASSERT_EQ(cv.pred_error.size(), 5u);
  EXPECT_LT(cv.mean_pred_error, 1e-20);
  EXPECT_NEAR(cv.mean_r_squared, 1.0, 1e-12);
  const auto zero = [](const DenseMatrix& Xt, const Vector&) -> Vector { return Vector::Zero(Xt.mat().cols()); };
  const auto cv0 = cross_validate(X, y, zero, 5, 3);
  EXPECT_GT(cv0.mean_pred_error, 0.1);
}
