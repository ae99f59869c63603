#include "vfbm/grid.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace vfbm {

TimeGrid::TimeGrid(double T, int n) : T_(T), n_(n) {
  require(std::isfinite(T) && T > 0.0, "grid horizon must be positive, got " + std::to_string(T));
  require(n >= 2, "grid needs at least 2 intervals, got " + std::to_string(n));
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(size());
  for (int i = 0; i < size(); ++i) t[i] = node(i);
  return t;
}

TimeGrid TimeGrid::coarsened(int factor) const {
  require(factor >= 1 && n_ % factor == 0, "coarsening factor must divide n");
  return TimeGrid(T_, n_ / factor);
}

TimeGrid build_grid(double T, int n) { return TimeGrid(T, n); }

GridFunction::GridFunction(TimeGrid grid, int dim)
    : grid_(grid), dim_(dim), values_(static_cast<size_t>(grid.size()) * dim, 0.0) {
  require(dim >= 1, "grid function dimension must be positive");
}

GridFunction::GridFunction(TimeGrid grid, int dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
  require(dim >= 1, "grid function dimension must be positive");
  require(values_.size() == static_cast<size_t>(grid_.size()) * dim_, "grid function value count mismatch");
  for (double v : values_) require(std::isfinite(v), "grid function values must be finite");
}

std::vector<double> GridFunction::component(int k) const {
  std::vector<double> out(size());
  for (int i = 0; i < size(); ++i) out[i] = at(i, k);
  return out;
}

GridFunction GridFunction::subsampled(int factor) const {
  GridFunction out(grid_.coarsened(factor), dim_);
  for (int i = 0; i < out.size(); ++i)
    for (int k = 0; k < dim_; ++k) out.at(i, k) = at(i * factor, k);
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require(grid_ == o.grid_ && dim_ == o.dim_, "grid function shape mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require(grid_ == o.grid_ && dim_ == o.dim_, "grid function shape mismatch");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += at(i, k) * at(i, k);
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

BivariateKernelValues::BivariateKernelValues(TimeGrid grid, int rows, int cols)
    : grid_(grid), rows_(rows), cols_(cols) {
  require(rows >= 1 && cols >= 1, "kernel block shape must be positive");
  const size_t pairs = static_cast<size_t>(grid.size()) * (grid.size() + 1) / 2;
  data_.assign(pairs * block(), 0.0);
}

namespace {

// \int_a^b w^p dw for 0 <= a < b.
double power_moment(double a, double b, double p) {
  const double q = p + 1.0;
  if (a == 0.0) return q > 0.0 ? std::pow(b, q) / q : std::numeric_limits<double>::infinity();
  const double r = std::log(b / a);
  if (std::abs(q) < 1e-14) return r;
  return std::pow(a, q) * std::expm1(q * r) / q;
}

struct GaussLegendre10 {
  std::array<double, 10> x{}, w{};
  GaussLegendre10() {
    constexpr int n = 10;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      // map [-1,1] -> [0,1]
      x[i] = 0.5 * (1.0 - z);
      w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre10& gauss10() {
  static const GaussLegendre10 g;
  return g;
}

}  // namespace

ProductRule::ProductRule(double h, double theta, int max_cells) : theta_(theta) {
  require(h > 0.0, "product rule step must be positive");
  require(theta < 2.0, "product rule requires theta < 2");
  require(max_cells >= 1, "product rule needs at least one cell");
  near_.assign(max_cells + 1, 0.0);
  far_.assign(max_cells + 1, 0.0);
  const double scale = std::pow(h, 1.0 - theta);
  const auto& gl = gauss10();
  for (int c = 1; c <= max_cells; ++c) {
    const double a = c - 1.0;
    double m0, mx;
    if (c <= 64) {
      m0 = power_moment(a, c, -theta);
      const double m1 = power_moment(a, c, 1.0 - theta);
      mx = c == 1 ? m1 : m1 - a * m0;
    } else {
      m0 = mx = 0.0;
      for (int q = 0; q < 10; ++q) {
        const double k = std::pow(a + gl.x[q], -theta);
        m0 += gl.w[q] * k;
        mx += gl.w[q] * gl.x[q] * k;
      }
    }
    far_[c] = scale * mx;
    near_[c] = std::isinf(m0) ? m0 : scale * (m0 - mx);
  }
}

void ProductRule::check_endpoint(double v) const {
  if (theta_ >= 1.0 && v != 0.0)
    throw SingularityError("non-integrable singularity: theta=" + std::to_string(theta_) +
                           " with nonzero endpoint value " + std::to_string(v));
}

double ProductRule::integrate_right(std::span<const double> v) const {
  const int k = static_cast<int>(v.size()) - 1;
  if (k <= 0) return 0.0;
  require(k <= max_cells(), "product rule table too short");
  check_endpoint(v[k]);
  double acc = 0.0;
  for (int c = 1; c <= k; ++c) {
    const double vn = v[k - c + 1];
    acc += far_[c] * v[k - c];
    if (vn != 0.0) acc += near_[c] * vn;
  }
  return acc;
}

double ProductRule::integrate_left(std::span<const double> v) const {
  const int k = static_cast<int>(v.size()) - 1;
  if (k <= 0) return 0.0;
  require(k <= max_cells(), "product rule table too short");
  check_endpoint(v[0]);
  double acc = 0.0;
  for (int c = 1; c <= k; ++c) {
    const double vn = v[c - 1];
    acc += far_[c] * v[c];
    if (vn != 0.0) acc += near_[c] * vn;
  }
  return acc;
}

std::vector<double> singular_weighted_integral(const GridFunction& phi, double theta, int i) {
  require(i >= 0 && i < phi.size(), "integration node out of range");
  require(theta >= 0.0 && theta < 2.0, "theta must lie in [0, 2)");
  std::vector<double> out(phi.dim(), 0.0);
  if (i == 0) return out;
  ProductRule rule(phi.grid().step(), theta, i);
  std::vector<double> v(i + 1);
  for (int k = 0; k < phi.dim(); ++k) {
    for (int j = 0; j <= i; ++j) v[j] = phi.at(j, k);
    out[k] = rule.integrate_right(v);
  }
  return out;
}

double trapezoid(std::span<const double> v, double h) {
  if (v.size() < 2) return 0.0;
  double acc = 0.5 * (v.front() + v.back());
  for (size_t j = 1; j + 1 < v.size(); ++j) acc += v[j];
  return acc * h;
}

}  // namespace vfbm
