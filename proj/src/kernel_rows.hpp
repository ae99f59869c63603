#pragma once

// Per-row bodies shared by the serial and OpenMP kernel drivers.

#include <cmath>
#include <span>
#include <vector>

#include "vfbm/grid.hpp"
#include "vfbm/kernels.hpp"

namespace vfbm::kernels::rows {

inline size_t kernel_row_offset(int i, int block) {
  return static_cast<size_t>(i) * (i + 1) / 2 * static_cast<size_t>(block);
}

inline double increment_row(std::span<const double> values, int dim, int i, double power, const ProductRule& rule,
                            std::vector<double>& scratch) {
  scratch.resize(i + 1);
  const double* fi = values.data() + static_cast<size_t>(i) * dim;
  for (int j = 0; j <= i; ++j) {
    const double* fj = values.data() + static_cast<size_t>(j) * dim;
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += (fi[k] - fj[k]) * (fi[k] - fj[k]);
    const double d = std::sqrt(s);
    scratch[j] = power == 1.0 ? d : std::pow(d, power);
  }
  return rule.integrate_right(scratch);
}

// Fills weyl[b] and semi[b] for b = a+1..n (indices below a+1 untouched).
inline void weyl_row(std::span<const double> g, int a, double h, double alpha, const ProductRule& rule,
                     double inv_gamma_alpha, double* weyl, double* semi) {
  const int n = static_cast<int>(g.size()) - 1;
  const double ga = g[a];
  double signed_acc = 0.0, abs_acc = 0.0;
  for (int b = a + 1; b <= n; ++b) {
    const int c = b - a;
    const double v_far = ga - g[b];
    const double v_near = ga - g[b - 1];
    signed_acc += rule.far_weight(c) * v_far;
    abs_acc += rule.far_weight(c) * std::abs(v_far);
    if (c > 1) {
      signed_acc += rule.near_weight(c) * v_near;
      abs_acc += rule.near_weight(c) * std::abs(v_near);
    }
    const double dt = c * h;
    const double endpoint = v_far / std::pow(dt, 1.0 - alpha);
    weyl[b] = inv_gamma_alpha * (endpoint + (1.0 - alpha) * signed_acc);
    semi[b] = std::abs(endpoint) + abs_acc;
  }
}

inline void rs_row(std::span<const double> kernel, int i, int rows, int cols, std::span<const double> dg,
                   double* out) {
  const int block = rows * cols;
  const double* krow = kernel.data() + kernel_row_offset(i, block);
  for (int r = 0; r < rows; ++r) out[r] = 0.0;
  for (int j = 0; j < i; ++j) {
    const double* kij = krow + static_cast<size_t>(j) * block;
    const double* inc = dg.data() + static_cast<size_t>(j) * cols;
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int c = 0; c < cols; ++c) s += kij[r * cols + c] * inc[c];
      out[r] += s;
    }
  }
}

inline void trapezoid_row(std::span<const double> kernel, int i, int rows, double h, double* out) {
  const double* krow = kernel.data() + kernel_row_offset(i, rows);
  for (int r = 0; r < rows; ++r) {
    if (i == 0) {
      out[r] = 0.0;
      continue;
    }
    double acc = 0.5 * (krow[r] + krow[static_cast<size_t>(i) * rows + r]);
    for (int j = 1; j < i; ++j) acc += krow[static_cast<size_t>(j) * rows + r];
    out[r] = acc * h;
  }
}

}  // namespace vfbm::kernels::rows
