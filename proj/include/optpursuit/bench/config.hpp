#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "optpursuit/probgen.hpp"
#include "optpursuit/solvers.hpp"

namespace optpursuit::bench {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Task { Recover, Regress, Css, OracleCheck, Timing };

std::string_view to_string(Task t) noexcept;

struct GridPoint {
  Index n = 0;
  Index p = 0;
  Index K = 0;
  double sampling_rate = 0.0;  // n / p as configured, or the realised ratio
  double snr_db = 0.0;         // +inf means noiseless
  double rho = 0.0;
  probgen::SignalKind signal = probgen::SignalKind::RandomSupport;

  // Canonical text of the coordinates, hashed into trial seeds.
  std::string key() const;
  double axis(const std::string& name) const;
};

struct Grid {
  std::vector<Index> n;
  std::vector<double> sampling_rate;
  std::vector<Index> p;
  std::vector<Index> K;
  std::vector<double> snr_db;
  std::vector<double> rho;
  std::vector<probgen::SignalKind> signal;
};

struct PhaseSpec {
  bool enabled = false;
  std::string row;
  std::string col;
  std::string metric = "nmse";  // or "success"
};

struct ExperimentConfig {
  Task task = Task::Recover;
  std::vector<std::string> solvers;
  Index trials = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path output = "results";
  Grid grid;
  bool center = false;
  bool normalize = false;
  solvers::SolverConfig solver;
  PhaseSpec phase;
  int folds = 5;         // regress
  Index css_rank = 5;    // css: rank of the low-rank part
  double css_noise = 0.01;
  Index oracle_kmax = 6; // oracle-check: |S| drawn from 1..kmax

  // Cartesian product in the fixed axis order signal, rho, p, n, K, snr.
  std::vector<GridPoint> points() const;
};

const std::vector<std::string>& known_solvers(Task t);

ExperimentConfig parse_config(const std::string& toml_text);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

}  // namespace optpursuit::bench
