#include "optpursuit/bench/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>

#include "optpursuit/css.hpp"
#include "optpursuit/metrics.hpp"
#include "optpursuit/oracle.hpp"
#include "optpursuit/probgen.hpp"

namespace optpursuit::bench {

namespace {

using EIdx = Eigen::Index;
using Clock = std::chrono::steady_clock;

const std::vector<std::pair<std::string, std::string>> kPairs = {
    {"op", "omp"}, {"cosaop", "cosamp"}, {"opbess", "bess"}, {"ogp", "gp"}};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string describe(const std::exception& e) {
  std::string msg;
  if (const auto* err = dynamic_cast<const Error*>(&e)) msg = std::string(to_string(err->code())) + ": ";
  msg += e.what();
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  std::replace(msg.begin(), msg.end(), '\r', ' ');
  return msg;
}

// Standardized design plus the coefficients it is generated by.
struct Prepared {
  DenseMatrix X;
  Vector y;
  std::optional<Vector> beta_ref;
};

Prepared prepare(const probgen::ProblemInstance& inst, bool center, bool normalize) {
  Prepared out{inst.X, inst.y, inst.beta_true};
  if (!center && !normalize) return out;
  Matrix m = inst.X.mat();
  if (center) m.rowwise() -= m.colwise().mean();
  Vector scale = Vector::Ones(m.cols());
  if (normalize)
    for (EIdx j = 0; j < m.cols(); ++j) {
      const double nrm = m.col(j).norm();
      if (nrm > 0.0) {
        m.col(j) /= nrm;
        scale(j) = nrm;
      }
    }
  out.X = DenseMatrix(std::move(m));
  if (center) out.y = (inst.y.array() - inst.y.mean()).matrix();
  if (out.beta_ref) out.beta_ref = out.beta_ref->cwiseProduct(scale);
  return out;
}

probgen::Meta meta_for(const GridPoint& g, std::uint64_t seed) {
  probgen::Meta m;
  m.seed = seed;
  m.n = g.n;
  m.p = g.p;
  m.K = g.K;
  if (std::isfinite(g.snr_db)) m.snr_db = g.snr_db;
  if (g.rho > 0.0) m.rho = g.rho;
  m.signal_kind = g.signal;
  return m;
}

ResultRow base_row(Index gi, const GridPoint& g, const std::string& solver, Index trial, std::uint64_t seed) {
  ResultRow r;
  r.grid_index = gi;
  r.point = g;
  r.solver = solver;
  r.trial = trial;
  r.trial_seed = seed;
  return r;
}

void regression_trial(const ExperimentConfig& cfg, Index gi, const GridPoint& g, Index trial, std::uint64_t seed,
                      std::vector<ResultRow>& out) {
  std::optional<Prepared> prep;
  std::string gen_error;
  try {
    prep = prepare(probgen::make_instance(meta_for(g, seed)), cfg.center, cfg.normalize);
  } catch (const std::exception& e) {
    gen_error = describe(e);
  }
  for (const std::string& name : cfg.solvers) {
    ResultRow r = base_row(gi, g, name, trial, seed);
    if (!prep) {
      r.error = gen_error;
      out.push_back(std::move(r));
      continue;
    }
    try {
      solvers::SolverConfig sc = cfg.solver;
      sc.sparsity = g.K;
      const solvers::SolveReport rep = run_solver(name, prep->X, prep->y, sc);
      const Vector fitted = prep->X.mat() * rep.beta;
      r.rss = (prep->y - fitted).squaredNorm();
      try {
        r.r2 = metrics::r_squared(prep->y, fitted);
      } catch (const Error&) {
      }
      if (prep->beta_ref) {
        r.success = metrics::exact_recovery(rep.support, probgen::support_of(*prep->beta_ref));
        r.nmse = metrics::nmse(rep.beta, *prep->beta_ref);
      }
      r.iterations = rep.iterations;
      r.wall_time_ns = rep.wall_time.count();
      if (cfg.task == Task::Regress) {
        const metrics::CvResult cv = metrics::cross_validate(
            prep->X, prep->y, [&](const DenseMatrix& Xt, const Vector& yt) { return run_solver(name, Xt, yt, sc).beta; },
            cfg.folds, seed);
        r.pred_error = cv.mean_pred_error;
        r.r2 = cv.mean_r_squared;
      }
    } catch (const std::exception& e) {
      r.error = describe(e);
    }
    out.push_back(std::move(r));
  }
}

DenseMatrix low_rank_plus_noise(const GridPoint& g, Index rank, double noise, std::uint64_t seed) {
  using probgen::Stream;
  const Matrix U = probgen::gaussian_design(g.n, rank, probgen::substream_seed(seed, Stream::Design)).mat();
  const Matrix V = probgen::gaussian_design(rank, g.p, probgen::substream_seed(seed, Stream::Signal)).mat();
  const Matrix E = probgen::gaussian_design(g.n, g.p, probgen::substream_seed(seed, Stream::Noise)).mat();
  return DenseMatrix(U * V + noise * std::sqrt(static_cast<double>(rank)) * E);
}

void css_trial(const ExperimentConfig& cfg, Index gi, const GridPoint& g, Index trial, std::uint64_t seed,
               std::vector<ResultRow>& out) {
  std::optional<DenseMatrix> X;
  std::string gen_error;
  try {
    X = low_rank_plus_noise(g, cfg.css_rank, cfg.css_noise, seed);
  } catch (const std::exception& e) {
    gen_error = describe(e);
  }
  for (const std::string& name : cfg.solvers) {
    ResultRow r = base_row(gi, g, name, trial, seed);
    if (!X) {
      r.error = gen_error;
      out.push_back(std::move(r));
      continue;
    }
    try {
      const auto start = Clock::now();
      if (name == "svd-bound") {
        r.rel_error = css::svd_rank_bound(*X, g.K);
      } else if (name == "leverage") {
        r.rel_error = css::leverage_score_baseline(*X, g.K, std::min({g.K, g.n, g.p})).relative_error;
      } else {
        const css::CssReport rep = css::css_solve(*X, g.K, css::parse_variant(name));
        r.rel_error = rep.relative_error;
        r.iterations = rep.swaps;
      }
      r.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    } catch (const std::exception& e) {
      r.error = describe(e);
    }
    out.push_back(std::move(r));
  }
}

std::vector<Index> random_subset(probgen::Rng& rng, Index p, Index size) {
  std::vector<Index> pool(p);
  for (Index i = 0; i < p; ++i) pool[i] = i;
  for (Index i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.below(p - i)]);
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size)};
}

void oracle_trial(const ExperimentConfig& cfg, Index gi, const GridPoint& g, Index trial, std::uint64_t seed,
                  std::vector<ResultRow>& out) {
  using probgen::Stream;
  const auto ds = probgen::substream_seed(seed, Stream::Design);
  const DenseMatrix X = g.rho > 0.0 ? probgen::toeplitz_design(g.n, g.p, g.rho, ds) : probgen::gaussian_design(g.n, g.p, ds);
  probgen::Rng noise(probgen::substream_seed(seed, Stream::Noise));
  Vector y(static_cast<EIdx>(g.n));
  for (EIdx i = 0; i < y.size(); ++i) y(i) = noise.normal();
  probgen::Rng pick(probgen::substream_seed(seed, Stream::Signal));
  const Index s = 1 + pick.below(cfg.oracle_kmax);
  const std::vector<Index> sel_support = random_subset(pick, g.p, s + 1);
  const std::vector<Index> S(sel_support.begin(), sel_support.end() - 1);

  for (const std::string& name : cfg.solvers) {
    ResultRow r = base_row(gi, g, name, trial, seed);
    try {
      const auto start = Clock::now();
      bool agree = false;
      if (name == "optimal-selection") {
        const la::SupportState st = la::least_squares_on_support(X, y, S);
        const auto sc = criteria::optimal_selection(X, st, criteria::complement(g.p, S));
        const auto ref = oracle::best_addition(X, y, S);
        agree = std::find(ref.ties.begin(), ref.ties.end(), sc.best_index()) != ref.ties.end();
        r.rss = ref.f_value;
      } else {
        // one larger than the selection support so that |S| >= 2
        const la::SupportState st = la::least_squares_on_support(X, y, sel_support);
        const auto sc = criteria::optimal_elimination(X, y, st);
        const auto ref = oracle::best_deletion(X, y, sel_support);
        agree = std::find(ref.ties.begin(), ref.ties.end(), sc.best_index()) != ref.ties.end();
        r.rss = ref.f_value;
      }
      r.agreement = agree ? 1.0 : 0.0;
      r.success = agree;
      r.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    } catch (const std::exception& e) {
      r.error = describe(e);
    }
    out.push_back(std::move(r));
  }
}

std::string axis_label(double v) { return format_double(v); }

}  // namespace

solvers::SolveReport run_solver(const std::string& name, const DenseMatrix& X, const Vector& y,
                                solvers::SolverConfig cfg) {
  using solvers::Variant;
  const bool classic = name == "omp" || name == "cosamp" || name == "bess" || name == "gp";
  cfg.variant = classic ? Variant::Classical : Variant::Optimal;
  if (name == "omp" || name == "op") return solvers::solve_pursuit(X, y, cfg);
  if (name == "cosamp" || name == "cosaop") return solvers::solve_cosa(X, y, cfg);
  if (name == "bess" || name == "opbess") return solvers::solve_bess(X, y, cfg);
  if (name == "gp" || name == "ogp") return solvers::solve_gp(X, y, cfg);
  throw Error(ErrorCode::InvalidArgument, "unknown solver '" + name + "'");
}

std::uint64_t trial_seed(std::uint64_t master, const GridPoint& point, Index trial) {
  std::uint64_t st = master;
  st = probgen::splitmix64(st) ^ fnv1a(point.key());
  st = probgen::splitmix64(st) ^ static_cast<std::uint64_t>(trial);
  return probgen::splitmix64(st);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OPTPURSUIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return omp_get_max_threads();
}

std::vector<ResultRow> run_trials(const ExperimentConfig& cfg, int threads) {
  const std::vector<GridPoint> points = cfg.points();
  const Index items = points.size() * cfg.trials;
  std::vector<std::vector<ResultRow>> per_item(items);
  const int nt = std::max(1, resolve_threads(threads));

#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (std::int64_t w = 0; w < static_cast<std::int64_t>(items); ++w) {
    const Index gi = static_cast<Index>(w) / cfg.trials;
    const Index trial = static_cast<Index>(w) % cfg.trials;
    const GridPoint& g = points[gi];
    const std::uint64_t seed = trial_seed(cfg.master_seed, g, trial);
    auto& out = per_item[static_cast<std::size_t>(w)];
    switch (cfg.task) {
      case Task::Recover:
      case Task::Regress:
      case Task::Timing: regression_trial(cfg, gi, g, trial, seed, out); break;
      case Task::Css: css_trial(cfg, gi, g, trial, seed, out); break;
      case Task::OracleCheck: oracle_trial(cfg, gi, g, trial, seed, out); break;
    }
  }

  std::map<std::string, std::size_t> solver_rank;
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i) solver_rank[cfg.solvers[i]] = i;
  std::vector<ResultRow> rows;
  for (auto& v : per_item)
    for (auto& r : v) rows.push_back(std::move(r));
  std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    if (a.grid_index != b.grid_index) return a.grid_index < b.grid_index;
    const auto ra = solver_rank[a.solver], rb = solver_rank[b.solver];
    if (ra != rb) return ra < rb;
    return a.trial < b.trial;
  });
  return rows;
}

std::string phase_grid_csv(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows, const std::string& solver) {
  std::set<double> rv, cv;
  std::map<std::pair<double, double>, std::pair<double, Index>> cell;
  for (const ResultRow& r : rows) {
    const double a = r.point.axis(cfg.phase.row), b = r.point.axis(cfg.phase.col);
    rv.insert(a);
    cv.insert(b);
    if (r.solver != solver || !r.error.empty()) continue;
    double v;
    if (cfg.phase.metric == "success") {
      if (!r.success) continue;
      v = *r.success ? 1.0 : 0.0;
    } else {
      if (!r.nmse) continue;
      v = *r.nmse;
    }
    auto& c = cell[{a, b}];
    c.first += v;
    c.second += 1;
  }
  std::string out = csv_escape(cfg.phase.row + "\\" + cfg.phase.col);
  for (double b : cv) out += "," + axis_label(b);
  out += "\r\n";
  for (double a : rv) {
    out += axis_label(a);
    for (double b : cv) {
      out += ",";
      auto it = cell.find({a, b});
      if (it != cell.end() && it->second.second > 0)
        out += format_double(it->second.first / static_cast<double>(it->second.second));
    }
    out += "\r\n";
  }
  return out;
}

std::optional<double> median_wall_ratio(const std::vector<ResultRow>& rows, const std::string& num,
                                        const std::string& den) {
  auto median = [&](const std::string& name) -> std::optional<double> {
    std::vector<double> v;
    for (const ResultRow& r : rows)
      if (r.solver == name && r.error.empty()) v.push_back(static_cast<double>(r.wall_time_ns));
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  const auto a = median(num), b = median(den);
  if (!a || !b || !(*b > 0.0)) return std::nullopt;
  return *a / *b;
}

std::string timing_csv(const std::vector<ResultRow>& rows) {
  std::vector<std::string> names;
  for (const ResultRow& r : rows)
    if (std::find(names.begin(), names.end(), r.solver) == names.end()) names.push_back(r.solver);
  std::string out = "kind,name,value\r\n";
  for (const std::string& n : names) {
    std::vector<double> v;
    for (const ResultRow& r : rows)
      if (r.solver == n && r.error.empty()) v.push_back(static_cast<double>(r.wall_time_ns));
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    out += "median_wall_time_ns," + n + "," + format_double(v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m])) + "\r\n";
  }
  for (const auto& [a, b] : kPairs)
    if (const auto ratio = median_wall_ratio(rows, a, b)) out += "ratio," + a + "/" + b + "," + format_double(*ratio) + "\r\n";
  return out;
}

std::vector<std::filesystem::path> emit_phase_grid(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows,
                                                   const std::filesystem::path& dir) {
  if (!cfg.phase.enabled) throw ConfigError("phase", "no row/col axes configured");
  std::vector<std::filesystem::path> files;
  for (const std::string& s : cfg.solvers) {
    const auto path = dir / ("phase_" + s + ".csv");
    write_text(path, phase_grid_csv(cfg, rows, s));
    files.push_back(path);
  }
  return files;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  RunOutcome res;
  const std::filesystem::path dir = opts.out_dir.value_or(cfg.output);
  res.rows = run_trials(cfg, opts.threads);
  res.aggregates = aggregate(res.rows);
  for (const AggregateRow& a : res.aggregates)
    if (a.trials > 0 && a.failures == a.trials) res.some_point_all_failed = true;

  write_text(dir / "results.csv", results_to_csv(res.rows));
  res.files.push_back(dir / "results.csv");
  write_text(dir / "aggregate.csv", aggregate_to_csv(res.aggregates));
  res.files.push_back(dir / "aggregate.csv");
  if (cfg.phase.enabled) {
    const auto extra = emit_phase_grid(cfg, res.rows, dir);
    res.files.insert(res.files.end(), extra.begin(), extra.end());
  }
  if (cfg.task == Task::Timing) {
    write_text(dir / "timing.csv", timing_csv(res.rows));
    res.files.push_back(dir / "timing.csv");
  }
  return res;
}

}  // namespace optpursuit::bench
