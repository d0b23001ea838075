#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "optpursuit/kernels.hpp"
#include "optpursuit/probgen.hpp"

namespace {

using namespace optpursuit;

struct Fixture {
  Matrix X;
  Vector r;
  Matrix Xs;
  Matrix C;
  std::vector<Index> cols;

  Fixture(Index n, Index p, Index k) {
    X = probgen::gaussian_design(n, p, 11).mat();
    r = probgen::gaussian_design(n, 1, 12).mat().col(0);
    Xs = X.leftCols(static_cast<Eigen::Index>(k));
    C = (Xs.transpose() * Xs).inverse();
    cols.resize(p - k);
    std::iota(cols.begin(), cols.end(), k);
  }
};

void BM_CorrSerial(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1), 1);
  Vector out;
  for (auto _ : st) {
    kernels::serial::correlations(f.X, f.r, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_CorrOmp(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1), 1);
  Vector out;
  for (auto _ : st) {
    kernels::omp::correlations(f.X, f.r, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_ProjDiagSerial(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1), st.range(2));
  Vector out;
  for (auto _ : st) {
    kernels::serial::projected_diag(f.X, f.Xs, f.C, f.cols, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_ProjDiagOmp(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1), st.range(2));
  Vector out;
  for (auto _ : st) {
    kernels::omp::projected_diag(f.X, f.Xs, f.C, f.cols, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_CorrSerial)->Args({100, 200})->Args({1000, 4000});
BENCHMARK(BM_CorrOmp)->Args({100, 200})->Args({1000, 4000});
BENCHMARK(BM_ProjDiagSerial)->Args({100, 200, 10})->Args({1000, 4000, 40});
BENCHMARK(BM_ProjDiagOmp)->Args({100, 200, 10})->Args({1000, 4000, 40});

BENCHMARK_MAIN();
