#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optpursuit/bench/config.hpp"
#include "optpursuit/bench/csv.hpp"
#include "optpursuit/solvers.hpp"

namespace optpursuit::bench {

// Maps a registered regression solver name (omp, op, cosamp, ...) to its family and variant.
solvers::SolveReport run_solver(const std::string& name, const DenseMatrix& X, const Vector& y,
                                solvers::SolverConfig cfg);

// Stable in execution order: depends only on the master seed, the grid
// coordinates and the trial index.
std::uint64_t trial_seed(std::uint64_t master, const GridPoint& point, Index trial);

// 0 keeps the requested value; otherwise OPTPURSUIT_THREADS, else the OpenMP default.
int resolve_threads(int requested);

// All rows sorted by (grid point, solver in config order, trial).
std::vector<ResultRow> run_trials(const ExperimentConfig& cfg, int threads);

// Per-solver matrix of the phase metric; first row and column hold axis values.
std::string phase_grid_csv(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows, const std::string& solver);

// Median wall time per solver, then optimal/classical ratios for registered pairs.
std::string timing_csv(const std::vector<ResultRow>& rows);
std::optional<double> median_wall_ratio(const std::vector<ResultRow>& rows, const std::string& num,
                                        const std::string& den);

struct RunOptions {
  int threads = 0;
  std::optional<std::filesystem::path> out_dir;
};

struct RunOutcome {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
  std::vector<std::filesystem::path> files;
  bool some_point_all_failed = false;  // a (grid point, solver) with every trial in error
};

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Writes one phase_<solver>.csv per solver and returns the paths.
std::vector<std::filesystem::path> emit_phase_grid(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows,
                                                   const std::filesystem::path& dir);

}  // namespace optpursuit::bench
