#include "optpursuit/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace optpursuit::metrics {

namespace {

using EIdx = Eigen::Index;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void same_length(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
}

}  // namespace

double nmse(const Vector& beta_hat, const Vector& beta_true) {
  same_length(beta_hat, beta_true);
  const double t = beta_true.squaredNorm();
  if (!(t > 0.0)) throw Error(ErrorCode::ZeroTruth, "true coefficient vector is zero");
  return (beta_hat - beta_true).squaredNorm() / t;
}

bool exact_recovery(std::span<const Index> support_hat, std::span<const Index> support_true) {
  std::vector<Index> a(support_hat.begin(), support_hat.end());
  std::vector<Index> b(support_true.begin(), support_true.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

double r_squared(const Vector& y, const Vector& y_hat) {
  same_length(y, y_hat);
  const double tot = (y.array() - y.mean()).square().sum();
  if (!(tot > 0.0)) throw Error(ErrorCode::ConstantTarget, "target has zero variance");
  return 1.0 - (y - y_hat).squaredNorm() / tot;
}

double pred_error(const Vector& y, const Vector& y_hat) {
  same_length(y, y_hat);
  if (y.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty target");
  return (y - y_hat).squaredNorm() / static_cast<double>(y.size());
}

std::vector<int> kfold_assignment(Index n, int folds, std::uint64_t seed) {
  if (folds < 2 || static_cast<Index>(folds) > n)
    throw Error(ErrorCode::InvalidArgument, "need 2 <= folds <= n, got " + std::to_string(folds));
  std::vector<std::pair<std::uint64_t, Index>> keyed(n);
  for (Index i = 0; i < n; ++i) keyed[i] = {mix(seed ^ mix(i)), i};
  std::sort(keyed.begin(), keyed.end());
  const Index base = n / static_cast<Index>(folds);
  const Index extra = n % static_cast<Index>(folds);
  std::vector<int> out(n);
  Index pos = 0;
  for (int f = 0; f < folds; ++f) {
    const Index size = base + (static_cast<Index>(f) < extra ? 1 : 0);
    for (Index k = 0; k < size; ++k) out[keyed[pos++].second] = f;
  }
  return out;
}

CvResult cross_validate(const DenseMatrix& X, const Vector& y, const FitFn& fit, int folds, std::uint64_t seed) {
  if (static_cast<Index>(y.size()) != X.rows()) throw Error(ErrorCode::DimensionMismatch, "y length != n");
  const std::vector<int> fold = kfold_assignment(X.rows(), folds, seed);
  CvResult res;
  for (int f = 0; f < folds; ++f) {
    std::vector<EIdx> train, test;
    for (Index i = 0; i < X.rows(); ++i) (fold[i] == f ? test : train).push_back(static_cast<EIdx>(i));
    const Matrix Xtr = X.mat()(train, Eigen::all);
    const Vector ytr = y(train);
    const Vector beta = fit(DenseMatrix(Xtr), ytr);
    const Matrix Xte = X.mat()(test, Eigen::all);
    const Vector yte = y(test);
    const Vector yhat = Xte * beta;
    res.pred_error.push_back(pred_error(yte, yhat));
    res.r_squared.push_back(r_squared(yte, yhat));
  }
  res.mean_pred_error = std::accumulate(res.pred_error.begin(), res.pred_error.end(), 0.0) / folds;
  res.mean_r_squared = std::accumulate(res.r_squared.begin(), res.r_squared.end(), 0.0) / folds;
  return res;
}

}  // namespace optpursuit::metrics
