#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "optpursuit/bench/config.hpp"
#include "optpursuit/bench/csv.hpp"
#include "optpursuit/bench/runner.hpp"
#include "optpursuit/bench/toml_lite.hpp"

using namespace optpursuit;
using namespace optpursuit::bench;
namespace fs = std::filesystem;

namespace {

const char* kSmallRecover = R"(
task = "recover"
solvers = ["omp", "op"]
trials = 20
master_seed = 7
output = "unused"

[grid]
n = [100]
p = [200]
K = [10]
snr_db = [15.0]
)";

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("optpursuit_" + name);
  fs::remove_all(d);
  return d;
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

std::string strip_wall(const std::string& csv) {
  auto rows = parse_csv(csv);
  const auto& hdr = rows.at(0);
  const auto col = static_cast<std::size_t>(std::find(hdr.begin(), hdr.end(), "wall_time_ns") - hdr.begin());
  std::string out;
  for (auto& r : rows) {
    if (col < r.size()) r.erase(r.begin() + static_cast<std::ptrdiff_t>(col));
    for (const auto& f : r) out += f + "|";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(Toml, Subset) {
  const auto t = toml::parse(R"(
# comment
a = 1
b = -2.5e1   # trailing
c = "x\"y"
d = 'raw\n'
e = [1, 2,
     3,]
f = true
g = inf
[sec]
h.i = "deep"
)");
  EXPECT_EQ(t.at("a").i, 1);
  EXPECT_EQ(t.at("b").d, -25.0);
  EXPECT_EQ(t.at("c").s, "x\"y");
  EXPECT_EQ(t.at("d").s, "raw\\n");
  ASSERT_EQ(t.at("e").array.size(), 3u);
  EXPECT_EQ(t.at("e").array[2].i, 3);
  EXPECT_TRUE(t.at("f").b);
  EXPECT_TRUE(std::isinf(t.at("g").d));
  EXPECT_EQ(t.at("sec.h.i").s, "deep");
  EXPECT_THROW(toml::parse("a = 1\na = 2\n"), toml::ParseError);
  EXPECT_THROW(toml::parse("a = {b = 1}\n"), toml::ParseError);
  try {
    toml::parse("x = 1\ny = \n");
    FAIL();
  } catch (const toml::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Config, ParsesSmallRecover) {
  const auto cfg = parse_config(kSmallRecover);
  EXPECT_EQ(cfg.task, Task::Recover);
  EXPECT_EQ(cfg.trials, 20u);
  EXPECT_FALSE(cfg.center);
  EXPECT_FALSE(cfg.normalize);
  const auto pts = cfg.points();
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].n, 100u);
  EXPECT_EQ(pts[0].snr_db, 15.0);
}

TEST(Config, ErrorsCarryFieldPath) {
  const std::string base = kSmallRecover;
  EXPECT_EQ(field_of(base + "bogus = 1\n"), "grid.bogus");
  EXPECT_EQ(field_of("task = \"recover\"\nsolvers = [\"omp\", \"lasso\"]\ntrials = 1\n[grid]\nn=[5]\np=[10]\nK=[2]\n"),
            "solvers[1]");
  EXPECT_EQ(field_of("task = \"recover\"\nsolvers = [\"omp\"]\ntrials = 0\n[grid]\nn=[5]\np=[10]\nK=[2]\n"), "trials");
  EXPECT_EQ(field_of("task = \"recover\"\nsolvers = [\"omp\"]\ntrials = 2\n[grid]\nn=[5]\np=[10]\nK=[\"a\"]\n"),
            "grid.K[0]");
  EXPECT_EQ(field_of("task = \"recover\"\nsolvers = [\"omp\"]\ntrials = 2\n[grid]\nn=[5]\np=[10]\nK=[20]\n"), "grid.K");
  EXPECT_EQ(field_of("task = \"dance\"\n"), "task");
  EXPECT_EQ(field_of("task = \"recover\"\nsolvers = [\"omp\"]\n[grid]\nn=[5]\np=[10]\nK=[2]\nrho=[1.5]\n"),
            "grid.rho");
}

TEST(Config, RegressDefaultsToPreprocessing) {
  const auto cfg = parse_config("task = \"regress\"\nsolvers = [\"omp\"]\n[grid]\nn=[30]\np=[10]\nK=[2]\n");
  EXPECT_TRUE(cfg.center);
  EXPECT_TRUE(cfg.normalize);
}

TEST(Config, ShippedConfigsLoad) {
  int count = 0;
  for (const auto& e : fs::directory_iterator(OPTPURSUIT_CONFIG_DIR)) {
    if (e.path().extension() != ".toml") continue;
    EXPECT_NO_THROW(load_config(e.path())) << e.path();
    ++count;
  }
  EXPECT_GE(count, 2);
}

TEST(Csv, EscapeAndParse) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n1,,3\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], "b,c");
  EXPECT_EQ(rows[0][2], "d\"e");
  EXPECT_EQ(rows[1][1], "");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Runner, SmallGridRowsAndAggregates) {
  const auto cfg = parse_config(kSmallRecover);
  const auto dir = scratch("small");
  const auto out = run_experiment(cfg, {1, dir});
  EXPECT_EQ(out.rows.size(), 40u);
  EXPECT_EQ(out.aggregates.size(), 2u);
  EXPECT_FALSE(out.some_point_all_failed);
  EXPECT_EQ(parse_csv(read_text(dir / "results.csv")).size(), 41u);
  EXPECT_EQ(parse_csv(read_text(dir / "aggregate.csv")).size(), 3u);
  for (const auto& r : out.rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_TRUE(r.success.has_value());
    EXPECT_TRUE(r.nmse.has_value());
  }
  // same trial seed for both solvers, distinct across trials
  EXPECT_EQ(out.rows[0].trial_seed, out.rows[20].trial_seed);
  EXPECT_NE(out.rows[0].trial_seed, out.rows[1].trial_seed);
  fs::remove_all(dir);
}

TEST(Runner, AggregateIsFunctionOfResults) {
  const auto cfg = parse_config(kSmallRecover);
  const auto dir = scratch("agg");
  run_experiment(cfg, {1, dir});
  const auto rows = results_from_csv(read_text(dir / "results.csv"));
  EXPECT_EQ(aggregate_to_csv(aggregate(rows)), read_text(dir / "aggregate.csv"));
  EXPECT_EQ(results_to_csv(rows), read_text(dir / "results.csv"));
  fs::remove_all(dir);
}

TEST(Runner, RerunAndThreadCountAreByteStable) {
  auto cfg = parse_config(kSmallRecover);
  cfg.trials = 6;
  const auto a = scratch("t1"), b = scratch("t3"), c = scratch("t1b");
  run_experiment(cfg, {1, a});
  run_experiment(cfg, {3, b});
  run_experiment(cfg, {1, c});
  const auto ra = strip_wall(read_text(a / "results.csv"));
  EXPECT_EQ(ra, strip_wall(read_text(b / "results.csv")));
  EXPECT_EQ(ra, strip_wall(read_text(c / "results.csv")));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST(Runner, ErrorRowsDoNotAbort) {
  // K exceeds n, so the pursuit runs out of span before reaching K
  auto cfg = parse_config("task = \"recover\"\nsolvers = [\"omp\"]\ntrials = 3\n[grid]\nn=[6]\np=[10]\nK=[8]\n");
  const auto dir = scratch("err");
  const auto out = run_experiment(cfg, {1, dir});
  EXPECT_EQ(out.rows.size(), 3u);
  for (const auto& r : out.rows)
    if (!r.error.empty()) EXPECT_FALSE(r.success.has_value());
  const auto agg = aggregate(out.rows);
  Index errors = 0;
  for (const auto& r : out.rows) errors += r.error.empty() ? 0 : 1;
  EXPECT_EQ(agg.at(0).failures, errors);
  EXPECT_EQ(out.some_point_all_failed, errors == 3);
  fs::remove_all(dir);
}

TEST(Runner, PhaseGridTwoByTwo) {
  const auto cfg = parse_config(R"(
task = "recover"
solvers = ["omp", "op"]
trials = 4
master_seed = 3
[grid]
sampling_rate = [0.2, 0.4]
p = [60]
K = [4]
snr_db = [10.0, 30.0]
rho = [0.5]
signal = ["block"]
[phase]
row = "sampling_rate"
col = "snr_db"
metric = "nmse"
)");
  const auto dir = scratch("phase");
  const auto out = run_experiment(cfg, {1, dir});
  EXPECT_EQ(out.rows.size(), 4u * 2u * 4u);
  const auto grid = parse_csv(read_text(dir / "phase_op.csv"));
  ASSERT_EQ(grid.size(), 3u);
  ASSERT_EQ(grid[0].size(), 3u);
  EXPECT_EQ(grid[0][1], "10");
  EXPECT_EQ(grid[1][0], "0.20000000000000001");
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> manual;
  for (const auto& r : out.rows) {
    if (r.solver != "op") continue;
    auto& m = manual[{format_double(r.point.sampling_rate), format_double(r.point.snr_db)}];
    m.first += *r.nmse;
    m.second += 1;
  }
  for (std::size_t i = 1; i < 3; ++i)
    for (std::size_t j = 1; j < 3; ++j) {
      const auto& m = manual.at({grid[i][0], grid[0][j]});
      EXPECT_NEAR(std::stod(grid[i][j]), m.first / m.second, 1e-12);
    }
  EXPECT_TRUE(fs::exists(dir / "phase_omp.csv"));
  fs::remove_all(dir);
}

TEST(Runner, OracleCheckAgrees) {
  const auto cfg = parse_config(R"(
task = "oracle-check"
solvers = ["optimal-selection", "optimal-elimination"]
trials = 200
master_seed = 11
[grid]
n = [20]
p = [12]
rho = [0.0, 0.7]
[oracle]
kmax = 6
)");
  const auto out = run_experiment(cfg, {1, scratch("oracle")});
  ASSERT_EQ(out.aggregates.size(), 4u);
  for (const auto& a : out.aggregates) {
    EXPECT_EQ(a.failures, 0u);
    EXPECT_EQ(a.agreement.mean, 1.0) << a.solver;
  }
}

TEST(Runner, TimingReportsRatios) {
  const auto cfg = parse_config(R"(
task = "timing"
solvers = ["omp", "op"]
trials = 5
[grid]
n = [50]
p = [100]
K = [5]
snr_db = [20.0]
)");
  const auto dir = scratch("timing");
  run_experiment(cfg, {1, dir});
  const auto t = parse_csv(read_text(dir / "timing.csv"));
  bool has_ratio = false;
  for (const auto& r : t) has_ratio |= r.size() == 3 && r[0] == "ratio" && r[1] == "op/omp";
  EXPECT_TRUE(has_ratio);
  fs::remove_all(dir);
}

TEST(Runner, TrialSeedDependsOnCoordinates) {
  GridPoint a;
  a.n = 10;
  a.p = 20;
  a.K = 2;
  GridPoint b = a;
  b.snr_db = 5.0;
  EXPECT_NE(trial_seed(1, a, 0), trial_seed(1, b, 0));
  EXPECT_NE(trial_seed(1, a, 0), trial_seed(1, a, 1));
  EXPECT_NE(trial_seed(1, a, 0), trial_seed(2, a, 0));
  EXPECT_EQ(trial_seed(1, a, 3), trial_seed(1, a, 3));
}
