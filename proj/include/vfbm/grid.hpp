#pragma once

#include <span>
#include <vector>

#include "vfbm/error.hpp"

namespace vfbm {

/// Uniform partition t_i = i*T/n of [0, T], n >= 2.
class TimeGrid {
 public:
  TimeGrid(double T, int n);

  double horizon() const { return T_; }
  int intervals() const { return n_; }
  int size() const { return n_ + 1; }
  double step() const { return T_ / n_; }
  double node(int i) const { return i == n_ ? T_ : i * step(); }
  std::vector<double> nodes() const;

  /// Grid with every `factor`-th node; factor must divide n.
  TimeGrid coarsened(int factor) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double T_;
  int n_;
};

TimeGrid build_grid(double T, int n);

/// d-dimensional samples on every grid node, row-major (node, component).
class GridFunction {
 public:
  GridFunction(TimeGrid grid, int dim);
  GridFunction(TimeGrid grid, int dim, std::vector<double> values);

  template <class F>
  static GridFunction from_scalar(const TimeGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, 1, std::move(v));
  }

  const TimeGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  int size() const { return grid_.size(); }

  double& at(int i, int k) { return values_[static_cast<size_t>(i) * dim_ + k]; }
  double at(int i, int k) const { return values_[static_cast<size_t>(i) * dim_ + k]; }
  std::span<double> point(int i) { return {values_.data() + static_cast<size_t>(i) * dim_, static_cast<size_t>(dim_)}; }
  std::span<const double> point(int i) const {
    return {values_.data() + static_cast<size_t>(i) * dim_, static_cast<size_t>(dim_)};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Values of component k as a contiguous vector.
  std::vector<double> component(int k) const;
  GridFunction subsampled(int factor) const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double a);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double a, GridFunction f) { return f *= a; }

  /// max_i |f(t_i)| with Euclidean |.|.
  double sup_norm() const;

 private:
  TimeGrid grid_;
  int dim_;
  std::vector<double> values_;
};

/// f(t_i, t_j) for j <= i, each entry a rows x cols block (row-major).
class BivariateKernelValues {
 public:
  BivariateKernelValues(TimeGrid grid, int rows, int cols = 1);

  template <class F>
  static BivariateKernelValues from_scalar(const TimeGrid& grid, F&& f) {
    BivariateKernelValues k(grid, 1, 1);
    for (int i = 0; i < grid.size(); ++i)
      for (int j = 0; j <= i; ++j) k.entry(i, j)[0] = f(grid.node(i), grid.node(j));
    return k;
  }

  const TimeGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int block() const { return rows_ * cols_; }

  std::span<double> entry(int i, int j) { return {data_.data() + offset(i, j), static_cast<size_t>(block())}; }
  std::span<const double> entry(int i, int j) const {
    return {data_.data() + offset(i, j), static_cast<size_t>(block())};
  }
  /// All rows back to back, row i starting at entry (i, 0).
  std::span<const double> data() const { return data_; }
  /// Row i: entries j = 0..i stored contiguously.
  std::span<const double> row(int i) const {
    return {data_.data() + offset(i, 0), static_cast<size_t>(block()) * (i + 1)};
  }

 private:
  size_t offset(int i, int j) const {
    return (static_cast<size_t>(i) * (i + 1) / 2 + j) * static_cast<size_t>(block());
  }
  TimeGrid grid_;
  int rows_, cols_;
  std::vector<double> data_;
};

/// Product integration of (distance to a singular endpoint)^(-theta) against
/// the piecewise-linear interpolant of node values. Cell moments are exact,
/// so linear integrands are integrated to rounding.
///
/// For theta >= 1 the value at the singular node must be exactly zero
/// (increment-type integrand); otherwise SingularityError is thrown.
class ProductRule {
 public:
  ProductRule(double h, double theta, int max_cells);

  double theta() const { return theta_; }
  int max_cells() const { return static_cast<int>(near_.size()) - 1; }

  /// Kernel singular at the last value: sum over cells of v spaced by h.
  double integrate_right(std::span<const double> v) const;
  /// Kernel singular at the first value.
  double integrate_left(std::span<const double> v) const;

  /// Weight on the node nearer to (resp. farther from) the singular end for
  /// cell c = 1, 2, ... counted from the singular end. near_weight(1) is
  /// infinite when theta >= 1.
  double near_weight(int c) const { return near_[c]; }
  double far_weight(int c) const { return far_[c]; }

 private:
  void check_endpoint(double v) const;
  double theta_;
  std::vector<double> near_, far_;
};

/// \int_0^{t_i} (t_i - s)^{-theta} phi(s) ds, per component of phi.
std::vector<double> singular_weighted_integral(const GridFunction& phi, double theta, int i);

/// Trapezoid rule over equally spaced values.
double trapezoid(std::span<const double> v, double h);

}  // namespace vfbm
