#include <omp.h>

#include <cmath>

#include "kernel_rows.hpp"
#include "vfbm/kernels.hpp"

namespace vfbm::kernels::parallel {

void increment_profile(std::span<const double> values, int dim, double h, double theta, double power,
                       std::span<double> out) {
  const int n = static_cast<int>(values.size() / dim) - 1;
  const ProductRule rule(h, theta, n);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(dynamic, 16)
    for (int i = 0; i <= n; ++i) out[i] = rows::increment_row(values, dim, i, power, rule, scratch);
  }
}

namespace {

struct RowBest {
  PairSup weyl, semi;
};

std::vector<RowBest> weyl_rows(std::span<const double> g, double h, double alpha) {
  const int n = static_cast<int>(g.size()) - 1;
  const ProductRule rule(h, 2.0 - alpha, n);
  const double inv_ga = 1.0 / std::tgamma(alpha);
  std::vector<RowBest> best(n);
#pragma omp parallel
  {
    std::vector<double> w(n + 1), s(n + 1);
#pragma omp for schedule(dynamic, 8)
    for (int a = 0; a < n; ++a) {
      rows::weyl_row(g, a, h, alpha, rule, inv_ga, w.data(), s.data());
      RowBest rb;
      for (int b = a + 1; b <= n; ++b) {
        if (std::abs(w[b]) > rb.weyl.value) rb.weyl = {std::abs(w[b]), a, b};
        if (s[b] > rb.semi.value) rb.semi = {s[b], a, b};
      }
      best[a] = rb;
    }
  }
  return best;
}

}  // namespace

WeylSweep weyl_sweep(std::span<const double> g, double h, double alpha) {
  WeylSweep out;
  for (const auto& rb : weyl_rows(g, h, alpha)) {
    if (rb.weyl.value > out.weyl.value) out.weyl = rb.weyl;
    if (rb.semi.value > out.seminorm.value) out.seminorm = rb.semi;
  }
  return out;
}

std::vector<std::vector<double>> weyl_table(std::span<const double> g, double h, double alpha) {
  const int n = static_cast<int>(g.size()) - 1;
  const ProductRule rule(h, 2.0 - alpha, n);
  const double inv_ga = 1.0 / std::tgamma(alpha);
  std::vector<std::vector<double>> table(n + 1);
#pragma omp parallel
  {
    std::vector<double> w(n + 1), s(n + 1);
#pragma omp for schedule(dynamic, 8)
    for (int a = 0; a < n; ++a) {
      rows::weyl_row(g, a, h, alpha, rule, inv_ga, w.data(), s.data());
      table[a].assign(w.begin() + a + 1, w.end());
    }
  }
  return table;
}

PairSup holder_sweep(std::span<const double> values, int dim, double h, double exponent) {
  const int n = static_cast<int>(values.size() / dim) - 1;
  std::vector<PairSup> best(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    const double* fi = values.data() + static_cast<size_t>(i) * dim;
    PairSup b;
    for (int j = i + 1; j <= n; ++j) {
      const double* fj = values.data() + static_cast<size_t>(j) * dim;
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += (fj[k] - fi[k]) * (fj[k] - fi[k]);
      const double r = std::sqrt(s) / std::pow((j - i) * h, exponent);
      if (r > b.value) b = {r, i, j};
    }
    best[i] = b;
  }
  PairSup out;
  for (const auto& b : best)
    if (b.value > out.value) out = b;
  return out;
}

void rs_sums(std::span<const double> kernel, int n_nodes, int rows, int cols, std::span<const double> dg,
             std::span<double> out) {
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n_nodes; ++i) rows::rs_row(kernel, i, rows, cols, dg, out.data() + static_cast<size_t>(i) * rows);
}

void trapezoid_rows(std::span<const double> kernel, int n_nodes, int rows, double h, std::span<double> out) {
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n_nodes; ++i) rows::trapezoid_row(kernel, i, rows, h, out.data() + static_cast<size_t>(i) * rows);
}

}  // namespace vfbm::kernels::parallel
