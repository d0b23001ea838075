#include "optpursuit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace optpursuit::oracle {

namespace {

double binomial(Index n, Index k) {
  k = std::min(k, n - k);
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

OracleResult pick(const std::vector<std::pair<Index, double>>& values, std::vector<Index> skipped) {
  OracleResult out;
  out.skipped = std::move(skipped);
  if (values.empty()) {
    out.f_value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [j, f] : values) best = std::min(best, f);
  for (const auto& [j, f] : values)
    if (f <= best + kTieTol) out.ties.push_back(j);
  out.index = out.ties.front();
  out.f_value = best;
  return out;
}

}  // namespace

bool rss(const DenseMatrix& X, const Vector& y, std::span<const Index> S, double& out) {
  if (S.empty()) {
    out = y.squaredNorm();
    return true;
  }
  const Matrix Xs = la::gather_columns(X, S);
  Eigen::ColPivHouseholderQR<Matrix> qr(Xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < Xs.cols()) return false;
  out = (y - Xs * qr.solve(y)).squaredNorm();
  return true;
}

OracleResult best_addition(const DenseMatrix& X, const Vector& y, std::span<const Index> S) {
  std::vector<char> in(X.cols(), 0);
  for (Index j : S) in.at(j) = 1;
  std::vector<Index> trial(S.begin(), S.end());
  trial.push_back(0);
  std::vector<std::pair<Index, double>> values;
  std::vector<Index> skipped;
  for (Index j = 0; j < X.cols(); ++j) {
    if (in[j]) continue;
    trial.back() = j;
    double f = 0.0;
    if (rss(X, y, trial, f))
      values.emplace_back(j, f);
    else
      skipped.push_back(j);
  }
  return pick(values, std::move(skipped));
}

OracleResult best_deletion(const DenseMatrix& X, const Vector& y, std::span<const Index> S) {
  if (S.size() < 2) throw Error(ErrorCode::InvalidArgument, "best_deletion needs |S| >= 2");
  std::vector<std::pair<Index, double>> values;
  std::vector<Index> skipped;
  for (std::size_t pos = 0; pos < S.size(); ++pos) {
    std::vector<Index> trial;
    for (std::size_t i = 0; i < S.size(); ++i)
      if (i != pos) trial.push_back(S[i]);
    double f = 0.0;
    if (rss(X, y, trial, f))
      values.emplace_back(S[pos], f);
    else
      skipped.push_back(S[pos]);
  }
  std::sort(values.begin(), values.end());
  return pick(values, std::move(skipped));
}

SubsetResult best_subset_exhaustive(const DenseMatrix& X, const Vector& y, Index K) {
  const Index p = X.cols();
  if (K > p) throw Error(ErrorCode::InvalidArgument, "K exceeds p");
  if (binomial(p, K) > kMaxSubsets)
    throw Error(ErrorCode::TooLarge, "C(" + std::to_string(p) + ", " + std::to_string(K) + ") exceeds 1e6");
  SubsetResult best;
  best.f_value = std::numeric_limits<double>::infinity();
  std::vector<Index> idx(K);
  for (Index i = 0; i < K; ++i) idx[i] = i;
  while (true) {
    double f = 0.0;
    if (rss(X, y, idx, f) && f < best.f_value - kTieTol) {
      best.f_value = f;
      best.support = idx;
    }
    Index i = K;
    while (i > 0 && idx[i - 1] == p - K + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (Index k = i; k < K; ++k) idx[k] = idx[k - 1] + 1;
  }
  if (best.support.empty() && K > 0) throw Error(ErrorCode::SingularGram, "every K-subset is rank deficient");
  return best;
}

}  // namespace optpursuit::oracle
