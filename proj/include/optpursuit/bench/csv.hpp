#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optpursuit/bench/config.hpp"

namespace optpursuit::bench {

inline constexpr int kSchemaVersion = 1;

struct ResultRow {
  Index grid_index = 0;
  GridPoint point;
  std::string solver;
  Index trial = 0;
  std::uint64_t trial_seed = 0;
  std::optional<bool> success;
  std::optional<double> nmse;
  std::optional<double> r2;
  std::optional<double> rss;
  std::optional<double> pred_error;
  std::optional<double> rel_error;
  std::optional<double> agreement;
  Index iterations = 0;
  std::int64_t wall_time_ns = 0;
  std::string error;  // empty when the trial succeeded numerically
};

struct Stat {
  Index count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for fewer than two values
};

struct AggregateRow {
  Index grid_index = 0;
  GridPoint point;
  std::string solver;
  Index trials = 0;
  Index failures = 0;  // rows with an error
  Index successes = 0;
  Stat nmse, r2, rss, pred_error, rel_error, agreement, iterations;
  double median_wall_time_ns = 0.0;
};

std::string format_double(double v);
std::string csv_escape(const std::string& field);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

const std::vector<std::string>& result_columns();
std::string results_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> results_from_csv(const std::string& text);

// Groups by (grid_index, solver) in order of first appearance.
std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace optpursuit::bench
