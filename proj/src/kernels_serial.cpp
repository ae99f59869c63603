#include <cmath>

#include "kernel_rows.hpp"
#include "vfbm/kernels.hpp"

namespace vfbm::kernels::serial {

void increment_profile(std::span<const double> values, int dim, double h, double theta, double power,
                       std::span<double> out) {
  const int n = static_cast<int>(values.size() / dim) - 1;
  ProductRule rule(h, theta, n);
  std::vector<double> scratch;
  for (int i = 0; i <= n; ++i) out[i] = rows::increment_row(values, dim, i, power, rule, scratch);
}

WeylSweep weyl_sweep(std::span<const double> g, double h, double alpha) {
  const int n = static_cast<int>(g.size()) - 1;
  ProductRule rule(h, 2.0 - alpha, n);
  const double inv_ga = 1.0 / std::tgamma(alpha);
  std::vector<double> w(n + 1), s(n + 1);
  WeylSweep out;
  for (int a = 0; a < n; ++a) {
    rows::weyl_row(g, a, h, alpha, rule, inv_ga, w.data(), s.data());
    for (int b = a + 1; b <= n; ++b) {
      if (std::abs(w[b]) > out.weyl.value) out.weyl = {std::abs(w[b]), a, b};
      if (s[b] > out.seminorm.value) out.seminorm = {s[b], a, b};
    }
  }
  return out;
}

std::vector<std::vector<double>> weyl_table(std::span<const double> g, double h, double alpha) {
  const int n = static_cast<int>(g.size()) - 1;
  ProductRule rule(h, 2.0 - alpha, n);
  const double inv_ga = 1.0 / std::tgamma(alpha);
  std::vector<std::vector<double>> table(n + 1);
  std::vector<double> w(n + 1), s(n + 1);
  for (int a = 0; a < n; ++a) {
    rows::weyl_row(g, a, h, alpha, rule, inv_ga, w.data(), s.data());
    table[a].assign(w.begin() + a + 1, w.end());
  }
  return table;
}

PairSup holder_sweep(std::span<const double> values, int dim, double h, double exponent) {
  const int n = static_cast<int>(values.size() / dim) - 1;
  PairSup best;
  for (int i = 0; i < n; ++i) {
    const double* fi = values.data() + static_cast<size_t>(i) * dim;
    for (int j = i + 1; j <= n; ++j) {
      const double* fj = values.data() + static_cast<size_t>(j) * dim;
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += (fj[k] - fi[k]) * (fj[k] - fi[k]);
      const double r = std::sqrt(s) / std::pow((j - i) * h, exponent);
      if (r > best.value) best = {r, i, j};
    }
  }
  return best;
}

void rs_sums(std::span<const double> kernel, int n_nodes, int rows, int cols, std::span<const double> dg,
             std::span<double> out) {
  for (int i = 0; i < n_nodes; ++i) rows::rs_row(kernel, i, rows, cols, dg, out.data() + static_cast<size_t>(i) * rows);
}

void trapezoid_rows(std::span<const double> kernel, int n_nodes, int rows, double h, std::span<double> out) {
  for (int i = 0; i < n_nodes; ++i) rows::trapezoid_row(kernel, i, rows, h, out.data() + static_cast<size_t>(i) * rows);
}

}  // namespace vfbm::kernels::serial
