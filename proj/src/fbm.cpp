#include "vfbm/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace vfbm {

double fbm_covariance(double s, double t, double H) {
  require(H > 0.0 && H < 1.0, "Hurst parameter must lie in (0,1), got " + std::to_string(H));
  require(s >= 0.0 && t >= 0.0, "fBm covariance needs nonnegative times");
  const double e = 2.0 * H;
  return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_hurst(double H) { require(H > 0.0 && H < 1.0, "Hurst parameter must lie in (0,1)"); }

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t path, std::uint64_t component) {
  return splitmix(splitmix(splitmix(master) ^ path) ^ (component + 0x9e3779b97f4a7c15ULL));
}

DriverPath::DriverPath(GridFunction values, std::optional<double> hurst)
    : values_(std::move(values)), hurst_(hurst) {}

std::vector<double> DriverPath::increments() const {
  const int n = grid().intervals(), m = components();
  std::vector<double> dg(static_cast<size_t>(n) * m);
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < m; ++c) dg[static_cast<size_t>(j) * m + c] = values_.at(j + 1, c) - values_.at(j, c);
  return dg;
}

DriverPath DriverPath::subsampled(int factor) const { return DriverPath(values_.subsampled(factor), hurst_); }

DriverPath deterministic_path(const TimeGrid& grid, int m, const std::function<double(double)>& f) {
  require(m >= 1, "driver dimension must be positive");
  GridFunction v(grid, m);
  for (int i = 0; i < grid.size(); ++i)
    for (int c = 0; c < m; ++c) v.at(i, c) = f(grid.node(i));
  return DriverPath(std::move(v), std::nullopt);
}

CholeskySampler::CholeskySampler(TimeGrid grid, double H) : grid_(grid), H_(H) {
  check_hurst(H);
  const int n = grid.intervals();
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cov(i, j) = fbm_covariance(grid.node(i + 1), grid.node(j + 1), H);
  const double max_diag = cov.diagonal().maxCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  // Escalating diagonal jitter, capped at 1e-12 * max diagonal.
  for (double rel = 1e-16; llt.info() != Eigen::Success; rel *= 10.0) {
    if (rel > 1e-12) throw FactorizationError("fBm covariance is not positive definite after jitter");
    jitter_ = rel * max_diag;
    llt.compute(cov + jitter_ * Eigen::MatrixXd::Identity(n, n));
  }
  lower_ = llt.matrixL();
}

DriverPath CholeskySampler::sample(int m, Seed seed) const {
  require(m >= 1, "driver dimension must be positive");
  const int n = grid_.intervals();
  GridFunction v(grid_, m);
  Eigen::VectorXd z(n);
  for (int c = 0; c < m; ++c) {
    Rng rng(stream_seed(seed.master, seed.path, c));
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i) z[i] = normal(rng);
    const Eigen::VectorXd x = lower_.triangularView<Eigen::Lower>() * z;
    for (int i = 0; i < n; ++i) v.at(i + 1, c) = x[i];
  }
  return DriverPath(std::move(v), H_);
}

namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer fftw_buffer(int size) { return FftwBuffer(fftw_alloc_complex(size)); }

// Forward DFT of `buf` in place. Planning is serialized; FFTW planners are
// not reentrant.
void forward_dft(fftw_complex* buf, int size) {
  fftw_plan plan;
#pragma omp critical(vfbm_fftw_planner)
  plan = fftw_plan_dft_1d(size, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
#pragma omp critical(vfbm_fftw_planner)
  fftw_destroy_plan(plan);
}

}  // namespace

DaviesHarteSampler::DaviesHarteSampler(TimeGrid grid, double H) : grid_(grid), H_(H) {
  check_hurst(H);
  const int n = grid.intervals(), M = 2 * n;
  const double h2H = std::pow(grid.step(), 2.0 * H);
  auto autocov = [&](int k) {
    const double e = 2.0 * H;
    return 0.5 * (std::pow(std::abs(k + 1.0), e) - 2.0 * std::pow(std::abs(1.0 * k), e) +
                  std::pow(std::abs(k - 1.0), e)) *
           h2H;
  };
  auto buf = fftw_buffer(M);
  for (int j = 0; j < M; ++j) {
    const int k = j <= n ? j : M - j;
    buf[j][0] = autocov(k);
    buf[j][1] = 0.0;
  }
  forward_dft(buf.get(), M);
  double max_eig = 0.0;
  for (int j = 0; j < M; ++j) max_eig = std::max(max_eig, buf[j][0]);
  sqrt_eigen_.resize(M);
  for (int j = 0; j < M; ++j) {
    double lam = buf[j][0];
    if (lam < -1e-10 * max_eig)
      throw EmbeddingError("negative circulant eigenvalue " + std::to_string(lam) + " at index " + std::to_string(j));
    sqrt_eigen_[j] = std::sqrt(std::max(lam, 0.0) / M);
  }
}

DriverPath DaviesHarteSampler::sample(int m, Seed seed) const {
  require(m >= 1, "driver dimension must be positive");
  const int n = grid_.intervals(), M = 2 * n;
  GridFunction v(grid_, m);
  auto buf = fftw_buffer(M);
  for (int c = 0; c < m; ++c) {
    Rng rng(stream_seed(seed.master, seed.path, c));
    std::normal_distribution<double> normal;
    for (int j = 0; j < M; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      buf[j][0] = sqrt_eigen_[j] * re;
      buf[j][1] = sqrt_eigen_[j] * im;
    }
    forward_dft(buf.get(), M);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += buf[i][0];
      v.at(i + 1, c) = acc;
    }
  }
  return DriverPath(std::move(v), H_);
}

DriverPath sample_cholesky(const TimeGrid& grid, double H, int m, Seed seed) {
  return CholeskySampler(grid, H).sample(m, seed);
}

DriverPath sample_davies_harte(const TimeGrid& grid, double H, int m, Seed seed) {
  return DaviesHarteSampler(grid, H).sample(m, seed);
}

void write_path_csv(std::ostream& os, const DriverPath& path) {
  os << "t";
  for (int c = 0; c < path.components(); ++c) os << ",g" << (c + 1);
  os << "\n";
  char buf[64];
  for (int i = 0; i < path.grid().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", path.grid().node(i));
    os << buf;
    for (int c = 0; c < path.components(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", path.values().at(i, c));
      os << buf;
    }
    os << "\n";
  }
}

CovarianceAudit covariance_audit(const TimeGrid& grid, double H, long paths, std::uint64_t master, SamplerKind kind) {
  require(paths >= 2, "covariance audit needs at least two paths");
  const int n = grid.intervals();
  std::optional<CholeskySampler> chol;
  std::optional<DaviesHarteSampler> dh;
  if (kind == SamplerKind::Cholesky)
    chol.emplace(grid, H);
  else
    dh.emplace(grid, H);

  const size_t pairs = static_cast<size_t>(n) * (n + 1) / 2;
  std::vector<double> sum(pairs, 0.0), sum_sq(pairs, 0.0);
  constexpr long kBlock = 4096;
  std::vector<double> block(static_cast<size_t>(kBlock) * n);
  for (long start = 0; start < paths; start += kBlock) {
    const long count = std::min(kBlock, paths - start);
#pragma omp parallel for schedule(static)
    for (long p = 0; p < count; ++p) {
      const Seed seed{master, static_cast<std::uint64_t>(start + p)};
      const DriverPath g = chol ? chol->sample(1, seed) : dh->sample(1, seed);
      for (int i = 1; i <= n; ++i) block[static_cast<size_t>(p) * n + i - 1] = g.values().at(i, 0);
    }
    for (long p = 0; p < count; ++p) {
      const double* x = &block[static_cast<size_t>(p) * n];
      size_t q = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++q) {
          const double v = x[i] * x[j];
          sum[q] += v;
          sum_sq[q] += v * v;
        }
    }
  }

  CovarianceAudit audit;
  audit.H = H;
  audit.paths = paths;
  audit.kind = kind;
  size_t q = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j, ++q) {
      CovarianceEntry e;
      e.i = i;
      e.j = j;
      e.empirical = sum[q] / paths;
      e.exact = fbm_covariance(grid.node(i), grid.node(j), H);
      const double var = std::max(sum_sq[q] / paths - e.empirical * e.empirical, 0.0) * paths / (paths - 1);
      e.stderr_ = std::sqrt(var / paths);
      e.z = e.stderr_ > 0.0 ? std::abs(e.empirical - e.exact) / e.stderr_ : 0.0;
      audit.max_z = std::max(audit.max_z, e.z);
      audit.entries.push_back(e);
    }
  return audit;
}

void write_covariance_csv(std::ostream& os, const TimeGrid& grid, const CovarianceAudit& audit) {
  os << "i,j,s,t,empirical,exact,stderr,z\n";
  char buf[256];
  for (const auto& e : audit.entries) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.i, e.j, grid.node(e.i),
                  grid.node(e.j), e.empirical, e.exact, e.stderr_, e.z);
    os << buf;
  }
}

}  // namespace vfbm
