#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "optpursuit/probgen.hpp"

using namespace optpursuit;
using namespace optpursuit::probgen;

namespace {

double corr(const Matrix& X, Eigen::Index a, Eigen::Index b) {
  const Vector u = X.col(a).array() - X.col(a).mean();
  const Vector v = X.col(b).array() - X.col(b).mean();
  return u.dot(v) / (u.norm() * v.norm());
}

}  // namespace

TEST(Rng, DeterministicAndInRange) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

TEST(Rng, SubstreamsDiffer) {
  EXPECT_NE(substream_seed(5, Stream::Design), substream_seed(5, Stream::Signal));
  EXPECT_NE(substream_seed(5, Stream::Noise), substream_seed(6, Stream::Noise));
}

TEST(Rng, NormalMoments) {
  Rng r(9);
  double s = 0, s2 = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / N, 0.0, 0.01);
  EXPECT_NEAR(s2 / N, 1.0, 0.02);
}

TEST(GaussianDesign, Determinism) {
  const auto a = gaussian_design(30, 20, 11);
  const auto b = gaussian_design(30, 20, 11);
  const auto c = gaussian_design(30, 20, 12);
  EXPECT_EQ(a.mat(), b.mat());
  EXPECT_NE(a.mat(), c.mat());
}

TEST(GaussianDesign, ColumnMeans) {
  const Index n = 400, p = 300;
  const auto X = gaussian_design(n, p, 3);
  int within = 0;
  for (Index j = 0; j < p; ++j)
    if (std::abs(X.mat().col(static_cast<Eigen::Index>(j)).mean()) < 4.0 / std::sqrt(double(n))) ++within;
  EXPECT_GE(within, static_cast<int>(0.99 * p));
}

TEST(ToeplitzDesign, RhoZeroIsGaussian) {
  EXPECT_EQ(toeplitz_design(10, 8, 0.0, 4).mat(), gaussian_design(10, 8, 4).mat());
}

TEST(ToeplitzDesign, LagCorrelations) {
  const Index n = 4000;
  const auto X = toeplitz_design(n, 6, 0.7, 21);
  const double tol = 5.0 / std::sqrt(double(n));
  for (Eigen::Index j = 0; j + 1 < 6; ++j) EXPECT_NEAR(corr(X.mat(), j, j + 1), 0.7, tol);
  for (Eigen::Index j = 0; j + 2 < 6; ++j) EXPECT_NEAR(corr(X.mat(), j, j + 2), 0.49, tol);
  EXPECT_NEAR(X.mat().col(5).squaredNorm() / double(n), 1.0, 0.1);
}

TEST(SparseSignal, RandomSupport) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Vector b = sparse_signal(200, 10, SignalKind::RandomSupport, s);
    EXPECT_EQ(support_of(b).size(), 10u);
    for (Index j : support_of(b)) EXPECT_GE(std::abs(b(static_cast<Eigen::Index>(j))), kMagnitudeFloor);
  }
  const Vector dense = sparse_signal(7, 7, SignalKind::RandomSupport, 1);
  EXPECT_EQ(support_of(dense).size(), 7u);
}

TEST(SparseSignal, BlocksAreTwoRuns) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto S = support_of(sparse_signal(500, 10, SignalKind::BlockSparse, s));
    ASSERT_EQ(S.size(), 10u);
    int runs = 1;
    for (std::size_t i = 1; i < S.size(); ++i)
      if (S[i] != S[i - 1] + 1) ++runs;
    EXPECT_EQ(runs, 2);
    EXPECT_EQ(S[4] + 1 < S[5], true);
    EXPECT_EQ(S[4] - S[0], 4u);
    EXPECT_EQ(S[9] - S[5], 4u);
  }
  const auto full = support_of(sparse_signal(10, 10, SignalKind::BlockSparse, 1));
  EXPECT_EQ(full.size(), 10u);
}

TEST(SparseSignal, InfeasibleBlocks) {
  for (auto [p, K] : {std::pair<Index, Index>{10, 5}, {4, 6}, {10, 0}}) {
    try {
      sparse_signal(p, K, SignalKind::BlockSparse, 1);
      FAIL() << p << " " << K;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InfeasibleBlocks);
    }
  }
}

TEST(ObserveWithSnr, ExactRescaling) {
  const auto X = gaussian_design(50, 30, 1);
  const Vector b = sparse_signal(30, 5, SignalKind::RandomSupport, 2);
  const Vector signal = X.mat() * b;
  const Vector y15 = observe_with_snr(X, b, 15.0, 3);
  EXPECT_NEAR((y15 - signal).norm(), signal.norm() * std::pow(10.0, -0.75), 1e-12 * signal.norm());
  const Vector y5 = observe_with_snr(X, b, 5.0, 3);
  const Vector e15 = (y15 - signal).normalized(), e5 = (y5 - signal).normalized();
  EXPECT_LT((e15 - e5).norm(), 1e-12);
  EXPECT_NEAR(20 * std::log10(signal.norm() / (y5 - signal).norm()), 5.0, 1e-6);
  const Vector yinf = observe_with_snr(X, b, std::numeric_limits<double>::infinity(), 3);
  EXPECT_EQ(yinf, signal);
}

TEST(ObserveWithSnr, ZeroSignal) {
  const auto X = gaussian_design(5, 4, 1);
  try {
    observe_with_snr(X, Vector::Zero(4), 10.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroSignal);
  }
}

TEST(Instance, BundleRoundTrip) {
  Meta m;
  m.seed = 77;
  m.n = 12;
  m.p = 20;
  m.K = 4;
  m.snr_db = 12.5;
  m.rho = 0.3;
  m.signal_kind = SignalKind::BlockSparse;
  const auto inst = make_instance(m);
  EXPECT_EQ(support_of(*inst.beta_true).size(), 4u);
  const auto again = make_instance(m);
  EXPECT_EQ(inst.X.mat(), again.X.mat());
  EXPECT_EQ(inst.y, again.y);

  const auto dir = std::filesystem::temp_directory_path() / "optpursuit_bundle_test";
  std::filesystem::remove_all(dir);
  write_bundle(inst, dir);
  const auto back = read_bundle(dir);
  EXPECT_EQ(back.X.mat(), inst.X.mat());
  EXPECT_EQ(back.y, inst.y);
  ASSERT_TRUE(back.beta_true.has_value());
  EXPECT_EQ(*back.beta_true, *inst.beta_true);
  EXPECT_EQ(back.meta.seed, 77u);
  EXPECT_EQ(back.meta.K, 4u);
  EXPECT_EQ(*back.meta.snr_db, 12.5);
  EXPECT_EQ(*back.meta.rho, 0.3);
  EXPECT_EQ(back.meta.signal_kind, SignalKind::BlockSparse);
  std::filesystem::remove_all(dir);
}

TEST(Standardize, CentersAndScales) {
  const auto X = toeplitz_design(25, 6, 0.5, 8);
  const auto Z = standardize(X, true, true);
  for (Eigen::Index j = 0; j < 6; ++j) {
    EXPECT_NEAR(Z.mat().col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR(Z.mat().col(j).norm(), 1.0, 1e-12);
  }
  EXPECT_EQ(standardize(X, false, false).mat(), X.mat());
}
