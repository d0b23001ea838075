#include "optpursuit/probgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace optpursuit::probgen {

namespace {

using EIdx = Eigen::Index;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, Stream stream) noexcept {
  std::uint64_t state = master;
  const auto k = static_cast<std::uint64_t>(stream);
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i < k; ++i) out = splitmix64(state);
  return out;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() noexcept { return engine_(); }

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

Index Rng::below(Index bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "below(0)");
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x;
  do x = next();
  while (x >= limit);
  return static_cast<Index>(x % b);
}

std::string_view to_string(SignalKind k) noexcept {
  return k == SignalKind::BlockSparse ? "block" : "random";
}

SignalKind parse_signal_kind(std::string_view name) {
  if (name == "random") return SignalKind::RandomSupport;
  if (name == "block") return SignalKind::BlockSparse;
  throw Error(ErrorCode::InvalidArgument, "unknown signal kind '" + std::string(name) + "'");
}

DenseMatrix gaussian_design(Index n, Index p, std::uint64_t seed) {
  return toeplitz_design(n, p, 0.0, seed);
}

DenseMatrix toeplitz_design(Index n, Index p, double rho, std::uint64_t seed) {
  if (n < 1 || p < 1) throw Error(ErrorCode::InvalidArgument, "design needs n, p >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1)");
  Rng rng(seed);
  const double innov = std::sqrt(1.0 - rho * rho);
  Matrix X(static_cast<EIdx>(n), static_cast<EIdx>(p));
  for (EIdx i = 0; i < X.rows(); ++i) {
    X(i, 0) = rng.normal();
    for (EIdx j = 1; j < X.cols(); ++j) X(i, j) = rho * X(i, j - 1) + innov * rng.normal();
  }
  return DenseMatrix(std::move(X));
}

Vector sparse_signal(Index p, Index K, SignalKind kind, std::uint64_t seed) {
  if (kind == SignalKind::RandomSupport && K > p) throw Error(ErrorCode::InvalidArgument, "K exceeds p");
  Rng rng(seed);
  std::vector<Index> support;
  if (kind == SignalKind::RandomSupport) {
    std::vector<Index> pool(p);
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < K; ++i) std::swap(pool[i], pool[i + rng.below(p - i)]);
    support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(K));
  } else {
    if (K < 2 || K % 2 != 0 || K > p)
      throw Error(ErrorCode::InfeasibleBlocks, "block signals need an even K >= 2 with K <= p");
    const Index b = K / 2;
    Index s1 = 0, s2 = b;
    if (p > K) {
      // Choose two slots out of m with a gap of at least one between the runs.
      const Index m = p - K + 1;
      Index a = rng.below(m), c = rng.below(m - 1);
      if (c >= a) ++c;
      if (a > c) std::swap(a, c);
      s1 = a;
      s2 = c + b;
    }
    for (Index i = 0; i < b; ++i) {
      support.push_back(s1 + i);
      support.push_back(s2 + i);
    }
  }
  std::sort(support.begin(), support.end());
  Vector beta = Vector::Zero(static_cast<EIdx>(p));
  for (Index j : support) {
    double v;
    do v = rng.normal();
    while (std::abs(v) < kMagnitudeFloor);
    beta(static_cast<EIdx>(j)) = v;
  }
  return beta;
}

Vector observe_with_snr(const DenseMatrix& X, const Vector& beta_true, double snr_db, std::uint64_t seed) {
  if (static_cast<Index>(beta_true.size()) != X.cols())
    throw Error(ErrorCode::DimensionMismatch, "beta length does not match p");
  const Vector signal = X.mat() * beta_true;
  if (std::isinf(snr_db) && snr_db > 0) return signal;
  const double sn = signal.norm();
  if (!(sn > 0.0)) throw Error(ErrorCode::ZeroSignal, "X beta is zero, SNR undefined");
  Rng rng(seed);
  Vector eps(signal.size());
  for (EIdx i = 0; i < eps.size(); ++i) eps(i) = rng.normal();
  eps *= sn * std::pow(10.0, -snr_db / 20.0) / eps.norm();
  return signal + eps;
}

std::vector<Index> support_of(const Vector& beta) {
  std::vector<Index> s;
  for (EIdx j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) s.push_back(static_cast<Index>(j));
  return s;
}

ProblemInstance make_instance(const Meta& meta) {
  ProblemInstance inst;
  inst.meta = meta;
  const std::uint64_t ds = substream_seed(meta.seed, Stream::Design);
  inst.X = meta.rho ? toeplitz_design(meta.n, meta.p, *meta.rho, ds) : gaussian_design(meta.n, meta.p, ds);
  Vector beta = sparse_signal(meta.p, meta.K, meta.signal_kind, substream_seed(meta.seed, Stream::Signal));
  const double snr = meta.snr_db.value_or(std::numeric_limits<double>::infinity());
  inst.y = observe_with_snr(inst.X, beta, snr, substream_seed(meta.seed, Stream::Noise));
  inst.beta_true = std::move(beta);
  return inst;
}

DenseMatrix standardize(const DenseMatrix& X, bool center, bool normalize) {
  Matrix m = X.mat();
  if (center) m.rowwise() -= m.colwise().mean();
  if (normalize) {
    for (EIdx j = 0; j < m.cols(); ++j) {
      const double nrm = m.col(j).norm();
      if (nrm > 0.0) m.col(j) /= nrm;
    }
  }
  return DenseMatrix(std::move(m));
}

void write_csv_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  for (EIdx i = 0; i < m.rows(); ++i) {
    for (EIdx j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << fmt17(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0) throw Error(ErrorCode::InvalidArgument, path.string() + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::DimensionMismatch, path.string() + ": ragged rows");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<EIdx>(rows.size()), rows.empty() ? 0 : static_cast<EIdx>(rows.front().size()));
  for (EIdx i = 0; i < m.rows(); ++i)
    for (EIdx j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_bundle(const ProblemInstance& inst, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_csv_matrix(dir / "X.csv", inst.X.mat());
  write_csv_matrix(dir / "y.csv", inst.y);
  if (inst.beta_true) write_csv_matrix(dir / "beta.csv", *inst.beta_true);
  std::ofstream meta(dir / "meta.txt");
  meta << "generator=" << kGeneratorName << "\n";
  meta << "generator_version=" << kGeneratorVersion << "\n";
  meta << "seed=" << inst.meta.seed << "\n";
  meta << "n=" << inst.meta.n << "\np=" << inst.meta.p << "\nK=" << inst.meta.K << "\n";
  if (inst.meta.snr_db) meta << "snr_db=" << fmt17(*inst.meta.snr_db) << "\n";
  if (inst.meta.rho) meta << "rho=" << fmt17(*inst.meta.rho) << "\n";
  meta << "signal_kind=" << to_string(inst.meta.signal_kind) << "\n";
}

ProblemInstance read_bundle(const std::filesystem::path& dir) {
  std::map<std::string, std::string> kv;
  std::ifstream meta(dir / "meta.txt");
  if (!meta) throw Error(ErrorCode::InvalidArgument, "missing meta.txt in " + dir.string());
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  ProblemInstance inst;
  inst.X = DenseMatrix(read_csv_matrix(dir / "X.csv"));
  inst.y = read_csv_matrix(dir / "y.csv").reshaped();
  if (std::filesystem::exists(dir / "beta.csv")) inst.beta_true = Vector(read_csv_matrix(dir / "beta.csv").reshaped());
  inst.meta.seed = std::stoull(kv.at("seed"));
  inst.meta.n = std::stoull(kv.at("n"));
  inst.meta.p = std::stoull(kv.at("p"));
  inst.meta.K = std::stoull(kv.at("K"));
  if (kv.count("snr_db")) inst.meta.snr_db = std::stod(kv["snr_db"]);
  if (kv.count("rho")) inst.meta.rho = std::stod(kv["rho"]);
  if (kv.count("signal_kind")) inst.meta.signal_kind = parse_signal_kind(kv["signal_kind"]);
  if (inst.X.rows() != inst.meta.n || inst.X.cols() != inst.meta.p)
    throw Error(ErrorCode::DimensionMismatch, "X.csv shape disagrees with meta.txt");
  return inst;
}

}  // namespace optpursuit::probgen
