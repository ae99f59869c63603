#include "vfbm/integrals.hpp"

#include <cmath>
#include <sstream>

#include "vfbm/coeffs.hpp"
#include "vfbm/fraccalc.hpp"
#include "vfbm/kernels.hpp"

namespace vfbm {

std::string to_string(IntegralMethod m) {
  switch (m) {
    case IntegralMethod::RiemannStieltjesSum: return "riemann-stieltjes-sum";
    case IntegralMethod::FractionalRepresentation: return "fractional-representation";
    case IntegralMethod::LebesgueProductRule: return "lebesgue-product-rule";
  }
  return "unknown";
}

namespace {

void check_driver(const TimeGrid& grid, int cols, const DriverPath& g) {
  require(grid == g.grid(), "integrand and driver live on different grids");
  require(cols == g.components(), "integrand has " + std::to_string(cols) + " columns but the driver has " +
                                      std::to_string(g.components()) + " components");
}

// Evaluates (t_i, t_j) -> eval(t_i, t_j, x(t_j)) on the lower triangle and
// reports the first non-finite entry in (i, j) order.
BivariateKernelValues tabulate(const Evaluator& eval, const GridFunction& x, int rows, int cols,
                               const char* what) {
  const TimeGrid& grid = x.grid();
  BivariateKernelValues k(grid, rows, cols);
  const int n = grid.size();
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) eval(grid.node(i), grid.node(j), x.point(j), k.entry(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (double v : k.entry(i, j))
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg.precision(17);
          msg << what << " is not finite at t=" << grid.node(i) << " s=" << grid.node(j) << " x=(";
          for (int c = 0; c < x.dim(); ++c) msg << (c ? "," : "") << x.at(j, c);
          msg << ")";
          throw EvaluationError(msg.str());
        }
  return k;
}

// Weyl tables of every driver component.
std::vector<std::vector<std::vector<double>>> weyl_tables(const DriverPath& g, double alpha) {
  std::vector<std::vector<std::vector<double>>> out;
  for (int c = 0; c < g.components(); ++c)
    out.push_back(kernels::parallel::weyl_table(g.component(c), g.grid().step(), alpha));
  return out;
}

// W(s_j, t_i) with the convention W = 0 at j = i.
double weyl_at(const std::vector<std::vector<double>>& table, int j, int i) {
  return j == i ? 0.0 : table[j][i - j - 1];
}

}  // namespace

IntegralResult lebesgue_volterra(const BivariateKernelValues& f) {
  require(f.cols() == 1, "Lebesgue-Volterra integrand must be vector valued");
  const TimeGrid& grid = f.grid();
  std::vector<double> out(static_cast<size_t>(grid.size()) * f.rows());
  kernels::parallel::trapezoid_rows(f.data(), grid.size(), f.rows(), grid.step(), out);
  return {GridFunction(grid, f.rows(), std::move(out)), IntegralMethod::LebesgueProductRule};
}

BivariateKernelValues drift_kernel(const CoefficientSet& cs, const GridFunction& x) {
  require(x.dim() == cs.d, "state dimension does not match the coefficients");
  return tabulate(cs.drift, x, cs.d, 1, "drift");
}

BivariateKernelValues diffusion_kernel(const CoefficientSet& cs, const GridFunction& x) {
  require(x.dim() == cs.d, "state dimension does not match the coefficients");
  return tabulate(cs.sigma, x, cs.d, cs.m, "diffusion coefficient");
}

IntegralResult drift_term(const CoefficientSet& cs, const GridFunction& x) {
  return lebesgue_volterra(drift_kernel(cs, x));
}

IntegralResult young_rs(const BivariateKernelValues& f, const DriverPath& g) {
  check_driver(f.grid(), f.cols(), g);
  const TimeGrid& grid = f.grid();
  std::vector<double> out(static_cast<size_t>(grid.size()) * f.rows());
  kernels::parallel::rs_sums(f.data(), grid.size(), f.rows(), f.cols(), g.increments(), out);
  return {GridFunction(grid, f.rows(), std::move(out)), IntegralMethod::RiemannStieltjesSum};
}

IntegralResult young_frac(const BivariateKernelValues& f, const DriverPath& g, double alpha) {
  FracParams check(alpha, f.grid().horizon());
  check_driver(f.grid(), f.cols(), g);
  const TimeGrid& grid = f.grid();
  const double h = grid.step();
  const int n = grid.intervals(), rows = f.rows(), cols = f.cols();
  const auto tables = weyl_tables(g, alpha);
  const ProductRule rule(h, alpha, n);
  GridFunction out(grid, rows);

#pragma omp parallel for schedule(dynamic)
  for (int i = 1; i <= n; ++i) {
    std::vector<double> series(i + 1), prod(i + 1);
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (int c = 0; c < cols; ++c) {
        for (int j = 0; j <= i; ++j) series[j] = f.entry(i, j)[r * cols + c];
        const auto scaled = scaled_left_frac_derivative(series, h, alpha);
        for (int j = 0; j <= i; ++j) prod[j] = scaled[j] * weyl_at(tables[c], j, i);
        acc += rule.integrate_left(prod);
      }
      out.at(i, r) = -acc;
    }
  }
  return {std::move(out), IntegralMethod::FractionalRepresentation};
}

IntegralResult young_frac(const GridFunction& f, const DriverPath& g, double alpha) {
  FracParams check(alpha, f.grid().horizon());
  check_driver(f.grid(), f.dim(), g);
  const TimeGrid& grid = f.grid();
  const double h = grid.step();
  const int n = grid.intervals(), m = f.dim();
  const auto tables = weyl_tables(g, alpha);
  const ProductRule rule(h, alpha, n);
  std::vector<std::vector<double>> scaled;
  for (int c = 0; c < m; ++c) scaled.push_back(scaled_left_frac_derivative(f.component(c), h, alpha));
  // Scalar integral of <f, dg>, summed over components.
  GridFunction out(grid, 1);
#pragma omp parallel for schedule(dynamic)
  for (int i = 1; i <= n; ++i) {
    std::vector<double> prod(i + 1);
    double acc = 0.0;
    for (int c = 0; c < m; ++c) {
      for (int j = 0; j <= i; ++j) prod[j] = scaled[c][j] * weyl_at(tables[c], j, i);
      acc += rule.integrate_left(prod);
    }
    out.at(i, 0) = -acc;
  }
  return {std::move(out), IntegralMethod::FractionalRepresentation};
}

IntegralResult diffusion_term(const CoefficientSet& cs, const GridFunction& x, const DriverPath& g) {
  return young_rs(diffusion_kernel(cs, x), g);
}

IntegralResult diffusion_term_frac(const CoefficientSet& cs, const GridFunction& x, const DriverPath& g,
                                   double alpha) {
  return young_frac(diffusion_kernel(cs, x), g, alpha);
}

}  // namespace vfbm
