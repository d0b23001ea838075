#pragma once

#include <span>
#include <vector>

#include "optpursuit/densela.hpp"

namespace optpursuit::oracle {

inline constexpr double kTieTol = 1e-12;
inline constexpr double kMaxSubsets = 1e6;

struct OracleResult {
  Index index = 0;             // chosen index, lowest among ties
  double f_value = 0.0;        // residual sum of squares at the optimum
  std::vector<Index> ties;     // every index within kTieTol of the optimum
  std::vector<Index> skipped;  // candidates whose refit was rank deficient
};

struct SubsetResult {
  std::vector<Index> support;  // ascending
  double f_value = 0.0;
};

// Residual sum of squares of the least-squares fit on S, via pivoted QR.
// Returns false when X_S is numerically rank deficient.
bool rss(const DenseMatrix& X, const Vector& y, std::span<const Index> S, double& out);

OracleResult best_addition(const DenseMatrix& X, const Vector& y, std::span<const Index> S);
OracleResult best_deletion(const DenseMatrix& X, const Vector& y, std::span<const Index> S);

SubsetResult best_subset_exhaustive(const DenseMatrix& X, const Vector& y, Index K);

}  // namespace optpursuit::oracle
