#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "optpursuit/densela.hpp"

namespace optpursuit::metrics {

double nmse(const Vector& beta_hat, const Vector& beta_true);
bool exact_recovery(std::span<const Index> support_hat, std::span<const Index> support_true);
double r_squared(const Vector& y, const Vector& y_hat);
double pred_error(const Vector& y, const Vector& y_hat);

// Fold id per sample. Samples are ordered by a seeded hash of their index;
// fold sizes are floor(n/folds) with the remainder given to the first folds.
std::vector<int> kfold_assignment(Index n, int folds, std::uint64_t seed);

struct CvResult {
  std::vector<double> pred_error;  // one per fold
  std::vector<double> r_squared;
  double mean_pred_error = 0.0;
  double mean_r_squared = 0.0;
};

// `fit` receives the training rows and returns a length-p coefficient vector.
using FitFn = std::function<Vector(const DenseMatrix& X_train, const Vector& y_train)>;

CvResult cross_validate(const DenseMatrix& X, const Vector& y, const FitFn& fit, int folds, std::uint64_t seed);

}  // namespace optpursuit::metrics
