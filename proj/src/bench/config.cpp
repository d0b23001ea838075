#include "optpursuit/bench/config.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <set>

#include "optpursuit/bench/toml_lite.hpp"

namespace optpursuit::bench {

namespace {

using toml::Value;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys = {
      "task", "solvers", "trials", "master_seed", "output",
      "grid.n", "grid.sampling_rate", "grid.p", "grid.K", "grid.snr_db", "grid.rho", "grid.signal",
      "preprocess.center", "preprocess.normalize",
      "solver.residual_tol", "solver.variation_tol", "solver.max_iter", "solver.splicing_kmax",
      "solver.splicing_threshold", "solver.ogp_reupdate", "solver.ogp_tau",
      "phase.row", "phase.col", "phase.metric",
      "regress.folds", "css.rank", "css.noise", "oracle.kmax"};
  return keys;
}

std::vector<Value> as_list(const Value& v) {
  if (v.type == Value::Type::Array) return v.array;
  return {v};
}

double get_double(const std::string& field, const Value& v) {
  if (!v.is_number()) throw ConfigError(field, "expected a number, got " + v.type_name());
  return v.as_double();
}

std::int64_t get_int(const std::string& field, const Value& v) {
  if (v.type != Value::Type::Int) throw ConfigError(field, "expected an integer, got " + v.type_name());
  return v.i;
}

Index get_count(const std::string& field, const Value& v) {
  const std::int64_t i = get_int(field, v);
  if (i < 0) throw ConfigError(field, "must be non-negative");
  return static_cast<Index>(i);
}

bool get_bool(const std::string& field, const Value& v) {
  if (v.type != Value::Type::Bool) throw ConfigError(field, "expected a boolean, got " + v.type_name());
  return v.b;
}

std::string get_string(const std::string& field, const Value& v) {
  if (v.type != Value::Type::String) throw ConfigError(field, "expected a string, got " + v.type_name());
  return v.s;
}

template <class T, class F>
std::vector<T> list_of(const std::string& field, const Value& v, F conv) {
  std::vector<T> out;
  const auto items = as_list(v);
  for (std::size_t i = 0; i < items.size(); ++i) out.push_back(conv(field + "[" + std::to_string(i) + "]", items[i]));
  return out;
}

bool is_axis(const std::string& name) {
  return name == "n" || name == "sampling_rate" || name == "p" || name == "K" || name == "snr_db" || name == "rho";
}

}  // namespace

std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::Recover: return "recover";
    case Task::Regress: return "regress";
    case Task::Css: return "css";
    case Task::OracleCheck: return "oracle-check";
    case Task::Timing: return "timing";
  }
  return "?";
}

std::string GridPoint::key() const {
  return "n=" + std::to_string(n) + ";p=" + std::to_string(p) + ";K=" + std::to_string(K) +
         ";snr_db=" + num(snr_db) + ";rho=" + num(rho) + ";signal=" + std::string(probgen::to_string(signal));
}

double GridPoint::axis(const std::string& name) const {
  if (name == "n") return static_cast<double>(n);
  if (name == "sampling_rate") return sampling_rate;
  if (name == "p") return static_cast<double>(p);
  if (name == "K") return static_cast<double>(K);
  if (name == "snr_db") return snr_db;
  if (name == "rho") return rho;
  throw ConfigError("phase", "unknown axis '" + name + "'");
}

std::vector<GridPoint> ExperimentConfig::points() const {
  std::vector<GridPoint> out;
  const std::size_t n_count = grid.sampling_rate.empty() ? grid.n.size() : grid.sampling_rate.size();
  for (auto sig : grid.signal)
    for (double rho : grid.rho)
      for (Index p : grid.p)
        for (std::size_t a = 0; a < n_count; ++a)
          for (Index K : grid.K)
            for (double snr : grid.snr_db) {
              GridPoint g;
              g.signal = sig;
              g.rho = rho;
              g.p = p;
              if (grid.sampling_rate.empty()) {
                g.n = grid.n[a];
                g.sampling_rate = static_cast<double>(g.n) / static_cast<double>(p);
              } else {
                g.sampling_rate = grid.sampling_rate[a];
                g.n = static_cast<Index>(std::llround(g.sampling_rate * static_cast<double>(p)));
              }
              g.K = K;
              g.snr_db = snr;
              out.push_back(g);
            }
  return out;
}

const std::vector<std::string>& known_solvers(Task t) {
  static const std::vector<std::string> regression = {"omp", "op", "cosamp", "cosaop", "bess", "opbess", "gp", "ogp"};
  static const std::vector<std::string> css = {"classic-greedy", "optimal-greedy", "classic-exchange",
                                               "optimal-exchange", "leverage", "svd-bound"};
  static const std::vector<std::string> oracle = {"optimal-selection", "optimal-elimination"};
  if (t == Task::Css) return css;
  if (t == Task::OracleCheck) return oracle;
  return regression;
}

ExperimentConfig parse_config(const std::string& toml_text) {
  toml::Table tab;
  try {
    tab = toml::parse(toml_text);
  } catch (const toml::ParseError& e) {
    throw ConfigError("<toml>", e.what());
  }
  for (const auto& [k, v] : tab)
    if (!allowed_keys().count(k)) throw ConfigError(k, "unknown key");

  auto has = [&](const char* k) { return tab.count(k) > 0; };
  ExperimentConfig cfg;

  if (!has("task")) throw ConfigError("task", "missing");
  const std::string task = get_string("task", tab.at("task"));
  if (task == "recover") cfg.task = Task::Recover;
  else if (task == "regress") cfg.task = Task::Regress;
  else if (task == "css") cfg.task = Task::Css;
  else if (task == "oracle-check") cfg.task = Task::OracleCheck;
  else if (task == "timing") cfg.task = Task::Timing;
  else throw ConfigError("task", "unknown task '" + task + "'");

  if (has("solvers")) cfg.solvers = list_of<std::string>("solvers", tab.at("solvers"), get_string);
  else if (cfg.task == Task::OracleCheck) cfg.solvers = known_solvers(cfg.task);
  if (has("trials")) cfg.trials = get_count("trials", tab.at("trials"));
  if (has("master_seed")) cfg.master_seed = static_cast<std::uint64_t>(get_count("master_seed", tab.at("master_seed")));
  if (has("output")) cfg.output = get_string("output", tab.at("output"));

  if (has("grid.n")) cfg.grid.n = list_of<Index>("grid.n", tab.at("grid.n"), get_count);
  if (has("grid.sampling_rate"))
    cfg.grid.sampling_rate = list_of<double>("grid.sampling_rate", tab.at("grid.sampling_rate"), get_double);
  if (has("grid.p")) cfg.grid.p = list_of<Index>("grid.p", tab.at("grid.p"), get_count);
  if (has("grid.K")) cfg.grid.K = list_of<Index>("grid.K", tab.at("grid.K"), get_count);
  cfg.grid.snr_db = has("grid.snr_db") ? list_of<double>("grid.snr_db", tab.at("grid.snr_db"), get_double)
                                       : std::vector<double>{std::numeric_limits<double>::infinity()};
  cfg.grid.rho = has("grid.rho") ? list_of<double>("grid.rho", tab.at("grid.rho"), get_double) : std::vector<double>{0.0};
  if (has("grid.signal")) {
    cfg.grid.signal = list_of<probgen::SignalKind>("grid.signal", tab.at("grid.signal"),
                                                   [](const std::string& f, const Value& v) {
                                                     try {
                                                       return probgen::parse_signal_kind(get_string(f, v));
                                                     } catch (const Error& e) {
                                                       throw ConfigError(f, e.what());
                                                     }
                                                   });
  } else {
    cfg.grid.signal = {probgen::SignalKind::RandomSupport};
  }
  if (cfg.grid.K.empty() && cfg.task == Task::OracleCheck) cfg.grid.K = {0};

  const bool regress = cfg.task == Task::Regress;
  cfg.center = has("preprocess.center") ? get_bool("preprocess.center", tab.at("preprocess.center")) : regress;
  cfg.normalize =
      has("preprocess.normalize") ? get_bool("preprocess.normalize", tab.at("preprocess.normalize")) : regress;

  auto& s = cfg.solver;
  if (has("solver.residual_tol")) s.residual_tol = get_double("solver.residual_tol", tab.at("solver.residual_tol"));
  if (has("solver.variation_tol")) s.variation_tol = get_double("solver.variation_tol", tab.at("solver.variation_tol"));
  if (has("solver.max_iter")) s.max_iter = get_count("solver.max_iter", tab.at("solver.max_iter"));
  if (has("solver.splicing_kmax")) s.splicing_kmax = get_count("solver.splicing_kmax", tab.at("solver.splicing_kmax"));
  if (has("solver.splicing_threshold"))
    s.splicing_threshold = get_double("solver.splicing_threshold", tab.at("solver.splicing_threshold"));
  if (has("solver.ogp_reupdate")) s.ogp_reupdate = get_bool("solver.ogp_reupdate", tab.at("solver.ogp_reupdate"));
  if (has("solver.ogp_tau")) s.ogp_tau = get_double("solver.ogp_tau", tab.at("solver.ogp_tau"));

  if (has("phase.row") || has("phase.col")) {
    cfg.phase.enabled = true;
    if (!has("phase.row") || !has("phase.col")) throw ConfigError("phase", "both row and col are required");
    cfg.phase.row = get_string("phase.row", tab.at("phase.row"));
    cfg.phase.col = get_string("phase.col", tab.at("phase.col"));
    if (has("phase.metric")) cfg.phase.metric = get_string("phase.metric", tab.at("phase.metric"));
  }
  if (has("regress.folds")) cfg.folds = static_cast<int>(get_count("regress.folds", tab.at("regress.folds")));
  if (has("css.rank")) cfg.css_rank = get_count("css.rank", tab.at("css.rank"));
  if (has("css.noise")) cfg.css_noise = get_double("css.noise", tab.at("css.noise"));
  if (has("oracle.kmax")) cfg.oracle_kmax = get_count("oracle.kmax", tab.at("oracle.kmax"));

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (cfg.solvers.empty()) throw ConfigError("solvers", "at least one solver is required");
  const auto& known = known_solvers(cfg.task);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
    const std::string f = "solvers[" + std::to_string(i) + "]";
    if (std::find(known.begin(), known.end(), cfg.solvers[i]) == known.end())
      throw ConfigError(f, "unknown solver '" + cfg.solvers[i] + "' for task " + std::string(to_string(cfg.task)));
    if (!seen.insert(cfg.solvers[i]).second) throw ConfigError(f, "duplicate solver '" + cfg.solvers[i] + "'");
  }
  const Grid& g = cfg.grid;
  if (!g.n.empty() && !g.sampling_rate.empty()) throw ConfigError("grid", "give either n or sampling_rate, not both");
  if (g.n.empty() && g.sampling_rate.empty()) throw ConfigError("grid.n", "missing (or grid.sampling_rate)");
  if (g.p.empty()) throw ConfigError("grid.p", "missing");
  if (g.K.empty()) throw ConfigError("grid.K", "missing");
  for (double r : g.sampling_rate)
    if (!(r > 0.0)) throw ConfigError("grid.sampling_rate", "rates must be positive");
  for (double r : g.rho)
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("grid.rho", "must lie in [0, 1)");
  for (double s : g.snr_db)
    if (std::isnan(s)) throw ConfigError("grid.snr_db", "NaN is not an SNR");
  for (const GridPoint& pt : cfg.points()) {
    if (pt.n < 1 || pt.p < 1) throw ConfigError("grid", "n and p must be >= 1 at " + pt.key());
    if (cfg.task != Task::OracleCheck && (pt.K < 1 || pt.K > pt.p))
      throw ConfigError("grid.K", "K must lie in [1, p] at " + pt.key());
    if (cfg.task == Task::OracleCheck && (cfg.oracle_kmax < 1 || cfg.oracle_kmax + 1 > pt.p))
      throw ConfigError("oracle.kmax", "need 1 <= kmax < p");
    if (cfg.task == Task::Css && cfg.css_rank < 1) throw ConfigError("css.rank", "must be >= 1");
    if (cfg.task == Task::Regress && (cfg.folds < 2 || static_cast<Index>(cfg.folds) > pt.n))
      throw ConfigError("regress.folds", "need 2 <= folds <= n");
  }
  if (cfg.phase.enabled) {
    if (!is_axis(cfg.phase.row)) throw ConfigError("phase.row", "unknown axis '" + cfg.phase.row + "'");
    if (!is_axis(cfg.phase.col)) throw ConfigError("phase.col", "unknown axis '" + cfg.phase.col + "'");
    if (cfg.phase.metric != "nmse" && cfg.phase.metric != "success")
      throw ConfigError("phase.metric", "expected \"nmse\" or \"success\"");
  }
  try {
    solvers::SolverConfig probe = cfg.solver;
    probe.sparsity = 1;
    probe.validate();
  } catch (const Error& e) {
    throw ConfigError("solver", e.what());
  }
}

}  // namespace optpursuit::bench
