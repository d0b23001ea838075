// optpursuit: experiment runner and small utilities around the solvers.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "optpursuit/bench/runner.hpp"
#include "optpursuit/css.hpp"
#include "optpursuit/probgen.hpp"

namespace {

using namespace optpursuit;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int report(const bench::RunOutcome& out) {
  for (const auto& f : out.files) std::cout << "wrote " << f.string() << "\n";
  for (const auto& a : out.aggregates) {
    std::cout << "grid " << a.grid_index << " " << a.solver << ": " << a.successes << "/" << a.trials << " success";
    if (a.failures) std::cout << ", " << a.failures << " failed";
    if (a.nmse.count) std::cout << ", nmse " << a.nmse.mean;
    if (a.rel_error.count) std::cout << ", rel_error " << a.rel_error.mean;
    if (a.agreement.count) std::cout << ", agreement " << a.agreement.mean;
    std::cout << "\n";
  }
  if (out.some_point_all_failed) {
    std::cerr << "error: every trial failed for at least one grid point\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-subset selection solvers and benchmark harness"};
  app.require_subcommand(1);
  int threads = 0;

  auto* run = app.add_subcommand("run", "Run an experiment grid from a TOML config");
  std::string config_path, out_dir;
  run->add_option("config", config_path, "Experiment config (.toml)")->required();
  run->add_option("--threads", threads, "Trial workers (default: OPTPURSUIT_THREADS or all cores)");
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* oc = app.add_subcommand("oracle-check", "Compare criteria argmax with exhaustive refits");
  Index oc_n = 20, oc_p = 12, oc_kmax = 6, oc_trials = 200;
  std::uint64_t oc_seed = 1;
  double oc_rho = 0.0;
  oc->add_option("--n", oc_n, "Samples")->capture_default_str();
  oc->add_option("--p", oc_p, "Features")->capture_default_str();
  oc->add_option("--kmax", oc_kmax, "Largest support size")->capture_default_str();
  oc->add_option("--trials", oc_trials, "Random instances")->capture_default_str();
  oc->add_option("--seed", oc_seed, "Master seed")->capture_default_str();
  oc->add_option("--rho", oc_rho, "Toeplitz correlation (0 for i.i.d.)")->capture_default_str();
  oc->add_option("--threads", threads, "Trial workers");
  oc->add_option("--out", out_dir, "Output directory")->default_val("oracle-check");

  auto* cs = app.add_subcommand("css", "Column subset selection on a CSV matrix");
  std::string css_input, css_variant = "optimal-greedy";
  Index css_k = 1;
  cs->add_option("--input", css_input, "Matrix CSV, rows are samples")->required()->check(CLI::ExistingFile);
  cs->add_option("--k", css_k, "Columns to select")->required();
  cs->add_option("--variant", css_variant,
                 "classic-greedy | optimal-greedy | classic-exchange | optimal-exchange | leverage")
      ->capture_default_str();

  auto* gen = app.add_subcommand("generate", "Write a synthetic instance as a CSV bundle");
  probgen::Meta meta;
  double snr = 0.0, rho = 0.0;
  std::string signal = "random", bundle_dir;
  gen->add_option("--n", meta.n, "Samples")->required();
  gen->add_option("--p", meta.p, "Features")->required();
  gen->add_option("--k", meta.K, "Nonzeros")->required();
  gen->add_option("--seed", meta.seed, "Master seed")->required();
  gen->add_option("--snr", snr, "SNR in dB (omit for noiseless)");
  gen->add_option("--rho", rho, "Toeplitz correlation");
  gen->add_option("--signal", signal, "random | block")->capture_default_str();
  gen->add_option("--out", bundle_dir, "Bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      const bench::ExperimentConfig cfg = bench::load_config(config_path);
      bench::RunOptions opts;
      opts.threads = threads;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      return report(bench::run_experiment(cfg, opts));
    }
    if (oc->parsed()) {
      bench::ExperimentConfig cfg;
      cfg.task = bench::Task::OracleCheck;
      cfg.solvers = bench::known_solvers(cfg.task);
      cfg.trials = oc_trials;
      cfg.master_seed = oc_seed;
      cfg.grid.n = {oc_n};
      cfg.grid.p = {oc_p};
      cfg.grid.K = {0};
      cfg.grid.snr_db = {0.0};
      cfg.grid.rho = {oc_rho};
      cfg.grid.signal = {probgen::SignalKind::RandomSupport};
      cfg.oracle_kmax = oc_kmax;
      bench::RunOptions opts;
      opts.threads = threads;
      opts.out_dir = out_dir;
      return report(bench::run_experiment(cfg, opts));
    }
    if (cs->parsed()) {
      const DenseMatrix X(probgen::read_csv_matrix(css_input));
      css::CssReport rep = css_variant == "leverage"
                               ? css::leverage_score_baseline(X, css_k, std::min({css_k, X.rows(), X.cols()}))
                               : css::css_solve(X, css_k, css::parse_variant(css_variant));
      std::cout << "support:";
      for (Index j : rep.support) std::cout << " " << j;
      std::printf("\nrelative_error: %.17g\nsvd_bound: %.17g\n", rep.relative_error, css::svd_rank_bound(X, css_k));
      return kExitOk;
    }
    if (gen->parsed()) {
      if (gen->count("--snr")) meta.snr_db = snr;
      if (rho > 0.0) meta.rho = rho;
      meta.signal_kind = probgen::parse_signal_kind(signal);
      probgen::write_bundle(probgen::make_instance(meta), bundle_dir);
      std::cout << "wrote " << bundle_dir << "\n";
      return kExitOk;
    }
  } catch (const bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const optpursuit::Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
