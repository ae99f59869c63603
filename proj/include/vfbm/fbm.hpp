#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vfbm/grid.hpp"

namespace vfbm {

/// R(s,t) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double s, double t, double H);

/// Master seed plus path index. Component c of path p draws from the stream
/// stream_seed(master, p, c).
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t path = 0;
};

/// splitmix64 finalizer applied to master, then folded with path and
/// component:  z = mix(mix(mix(master) ^ path) ^ (component + 0x9e37...)).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t path, std::uint64_t component);

using Rng = std::mt19937_64;

/// m-dimensional driver sampled on a grid. `hurst` is empty for
/// deterministic test paths.
class DriverPath {
 public:
  DriverPath(GridFunction values, std::optional<double> hurst);

  const TimeGrid& grid() const { return values_.grid(); }
  int components() const { return values_.dim(); }
  const GridFunction& values() const { return values_; }
  std::optional<double> hurst() const { return hurst_; }

  std::vector<double> component(int c) const { return values_.component(c); }
  /// Row-major (n, m) increments g(t_{j+1}) - g(t_j).
  std::vector<double> increments() const;
  DriverPath subsampled(int factor) const;

 private:
  GridFunction values_;
  std::optional<double> hurst_;
};

/// Deterministic driver g_c(t) = f(t) for every component.
DriverPath deterministic_path(const TimeGrid& grid, int m, const std::function<double(double)>& f);

/// Dense exact sampler: Cholesky factor of the covariance on t_1..t_n.
class CholeskySampler {
 public:
  CholeskySampler(TimeGrid grid, double H);
  DriverPath sample(int m, Seed seed) const;
  double jitter() const { return jitter_; }

 private:
  TimeGrid grid_;
  double H_;
  Eigen::MatrixXd lower_;
  double jitter_ = 0.0;
};

/// Circulant-embedding (Davies-Harte) sampler of the increment sequence.
class DaviesHarteSampler {
 public:
  DaviesHarteSampler(TimeGrid grid, double H);
  DriverPath sample(int m, Seed seed) const;

 private:
  TimeGrid grid_;
  double H_;
  std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / M), M = 2n
};

DriverPath sample_cholesky(const TimeGrid& grid, double H, int m, Seed seed);
DriverPath sample_davies_harte(const TimeGrid& grid, double H, int m, Seed seed);

enum class SamplerKind { Cholesky, DaviesHarte };

struct CovarianceEntry {
  int i = 0, j = 0;  // node indices, 1 <= i <= j <= n
  double empirical = 0.0, exact = 0.0, stderr_ = 0.0, z = 0.0;
};

struct CovarianceAudit {
  double H = 0.0;
  long paths = 0;
  SamplerKind kind = SamplerKind::Cholesky;
  std::vector<CovarianceEntry> entries;
  double max_z = 0.0;  // max |empirical - exact| / stderr
};

/// Sample second moments E[g(t_i) g(t_j)] of one component over `paths`
/// paths (path p uses Seed{master, p}) against R(t_i, t_j). Paths are drawn
/// in parallel blocks and accumulated in path order, so the result does not
/// depend on the thread count.
CovarianceAudit covariance_audit(const TimeGrid& grid, double H, long paths, std::uint64_t master, SamplerKind kind);

/// `i,j,s,t,empirical,exact,stderr,z`.
void write_covariance_csv(std::ostream& os, const TimeGrid& grid, const CovarianceAudit& audit);

/// CSV with header `t,g1..gm` and 17 significant digits.
void write_path_csv(std::ostream& os, const DriverPath& path);

}  // namespace vfbm
