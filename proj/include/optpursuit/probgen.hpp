#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "optpursuit/densela.hpp"

namespace optpursuit::probgen {

inline constexpr std::string_view kGeneratorName = "mt19937_64+splitmix64";
inline constexpr int kGeneratorVersion = 1;
inline constexpr double kMagnitudeFloor = 0.1;

enum class Stream : std::uint64_t { Design = 1, Signal = 2, Noise = 3 };

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Seed of an independent substream derived from a master seed.
std::uint64_t substream_seed(std::uint64_t master, Stream stream) noexcept;

// Integer-stepped generator with a fixed float mapping, so output does not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() noexcept;
  double uniform() noexcept;  // [0, 1), 53-bit resolution
  double normal() noexcept;   // Marsaglia polar method
  Index below(Index bound);   // uniform in [0, bound), unbiased

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class SignalKind { RandomSupport, BlockSparse };

std::string_view to_string(SignalKind k) noexcept;
SignalKind parse_signal_kind(std::string_view name);

DenseMatrix gaussian_design(Index n, Index p, std::uint64_t seed);
DenseMatrix toeplitz_design(Index n, Index p, double rho, std::uint64_t seed);

Vector sparse_signal(Index p, Index K, SignalKind kind, std::uint64_t seed);

// snr_db = +inf gives y = X beta exactly.
Vector observe_with_snr(const DenseMatrix& X, const Vector& beta_true, double snr_db, std::uint64_t seed);

std::vector<Index> support_of(const Vector& beta);

struct Meta {
  std::uint64_t seed = 0;
  Index n = 0;
  Index p = 0;
  Index K = 0;
  std::optional<double> snr_db;
  std::optional<double> rho;
  SignalKind signal_kind = SignalKind::RandomSupport;
};

struct ProblemInstance {
  DenseMatrix X;
  Vector y;
  std::optional<Vector> beta_true;
  Meta meta;
};

// Design from the Design substream (Toeplitz when rho is set), signal from
// Signal, noise from Noise. snr_db absent means noiseless.
ProblemInstance make_instance(const Meta& meta);

// Centers and/or scales columns to unit norm. Zero columns are left as is.
DenseMatrix standardize(const DenseMatrix& X, bool center, bool normalize);

void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_csv_matrix(const std::filesystem::path& path);

// X.csv, y.csv, beta.csv (when present) and meta.txt with key=value lines.
void write_bundle(const ProblemInstance& inst, const std::filesystem::path& dir);
ProblemInstance read_bundle(const std::filesystem::path& dir);

}  // namespace optpursuit::probgen
