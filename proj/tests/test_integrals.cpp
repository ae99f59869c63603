#include <doctest.h>

#include <cmath>

#include "vfbm/coeffs.hpp"
#include "vfbm/fbm.hpp"
#include "vfbm/integrals.hpp"

using namespace vfbm;

namespace {

double max_abs_diff(const GridFunction& f, double (*exact)(double)) {
  double e = 0.0;
  for (int i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f.at(i, 0) - exact(f.grid().node(i))));
  return e;
}

// Scalar drift-only model with b(t, s, x) = (t - s) x.
CoefficientSet lagged_linear() {
  CoefficientSet cs = builtin_coefficients("linear-drift");
  cs.drift = [](double t, double s, std::span<const double> x, std::span<double> out) { out[0] = (t - s) * x[0]; };
  return cs;
}

}  // namespace

TEST_CASE("lebesgue_volterra") {
  const TimeGrid grid(1.0, 64);
  auto one = lebesgue_volterra(BivariateKernelValues::from_scalar(grid, [](double, double) { return 1.0; }));
  CHECK(one.method == IntegralMethod::LebesgueProductRule);
  CHECK(max_abs_diff(one.values, [](double t) { return t; }) < 1e-14);
  auto lin = lebesgue_volterra(BivariateKernelValues::from_scalar(grid, [](double t, double s) { return t - s; }));
  CHECK(max_abs_diff(lin.values, [](double t) { return t * t / 2; }) < 1e-14);

  // Exponential kernel: second-order convergence.
  auto err = [](int n) {
    const TimeGrid g(1.0, n);
    auto r = lebesgue_volterra(BivariateKernelValues::from_scalar(g, [](double t, double s) { return std::exp(s - t); }));
    return max_abs_diff(r.values, [](double t) { return 1.0 - std::exp(-t); });
  };
  const double ratio = err(32) / err(64);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("drift_term") {
  const TimeGrid grid(1.0, 32);
  GridFunction c(grid, 1);
  for (int i = 0; i < c.size(); ++i) c.at(i, 0) = 2.5;
  auto lin = builtin_coefficients("linear-drift");
  auto r = drift_term(lin, c);
  CHECK(r.values.at(0, 0) == 0.0);
  for (int i = 0; i < c.size(); ++i) CHECK(r.values.at(i, 0) == doctest::Approx(2.5 * grid.node(i)));

  auto zero = drift_term(builtin_coefficients("constant-sigma"), c);
  CHECK(zero.values.sup_norm() == 0.0);

  // (t - s) s integrates to t^3 / 6 with O(h^2) trapezoid error.
  auto err = [](int n) {
    const TimeGrid g(1.0, n);
    auto x = GridFunction::from_scalar(g, [](double s) { return s; });
    return max_abs_diff(drift_term(lagged_linear(), x).values, [](double t) { return t * t * t / 6; });
  };
  CHECK(err(64) < 1e-4);
  CHECK(err(32) / err(64) == doctest::Approx(4.0).epsilon(0.05));

  auto bad = lagged_linear();
  bad.drift = [](double, double, std::span<const double>, std::span<double> out) { out[0] = NAN; };
  CHECK_THROWS_AS(drift_term(bad, c), EvaluationError);
}

TEST_CASE("young_rs") {
  const TimeGrid grid(1.0, 50);
  const auto g = sample_davies_harte(grid, 0.7, 1, {5, 0});
  auto r = young_rs(BivariateKernelValues::from_scalar(grid, [](double, double) { return -1.5; }), g);
  CHECK(r.method == IntegralMethod::RiemannStieltjesSum);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(r.values.at(i, 0) == doctest::Approx(-1.5 * (g.values().at(i, 0) - g.values().at(0, 0))).epsilon(1e-12));

  // f = s, g = s: left-point error is exactly t h / 2.
  const auto id = deterministic_path(grid, 1, [](double t) { return t; });
  auto s = young_rs(BivariateKernelValues::from_scalar(grid, [](double, double s) { return s; }), id);
  const double h = grid.step();
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i);
    CHECK(s.values.at(i, 0) == doctest::Approx(t * t / 2 - t * h / 2).scale(1.0));
  }

  // Dimension mismatch: 1 x 2 kernel against a one-component driver.
  CHECK_THROWS_AS(young_rs(BivariateKernelValues(grid, 1, 2), g), InvalidArgument);

  // Matrix contraction: rows (1, 0) and (0, 2) against two components.
  const auto g2 = sample_davies_harte(grid, 0.7, 2, {6, 0});
  BivariateKernelValues mat(grid, 2, 2);
  for (int i = 0; i < grid.size(); ++i)
    for (int j = 0; j <= i; ++j) {
      auto e = mat.entry(i, j);
      e[0] = 1.0, e[3] = 2.0;
    }
  auto mr = young_rs(mat, g2);
  CHECK(mr.values.at(50, 0) == doctest::Approx(g2.values().at(50, 0)));
  CHECK(mr.values.at(50, 1) == doctest::Approx(2.0 * g2.values().at(50, 1)));
}

TEST_CASE("young_rs pathwise chain rule") {
  const TimeGrid grid(1.0, 4096);
  const DaviesHarteSampler sampler(grid, 0.75);
  int checked = 0;
  for (std::uint64_t p = 0; checked < 5 && p < 200; ++p) {
    const auto g = sampler.sample(1, {77, p});
    const double end = g.values().at(4096, 0);
    if (std::abs(end) < 1.0) continue;  // keep the relative error meaningful
    BivariateKernelValues f(grid, 1, 1);
    for (int i = 0; i < grid.size(); ++i)
      for (int j = 0; j <= i; ++j) f.entry(i, j)[0] = g.values().at(j, 0);
    auto r = young_rs(f, g);
    CHECK(std::abs(r.values.at(4096, 0) - end * end / 2) < 0.02 * end * end / 2);
    ++checked;
  }
  CHECK(checked == 5);
}

TEST_CASE("young_frac matches the Stieltjes sums") {
  const TimeGrid grid(1.0, 1024);
  const auto id = deterministic_path(grid, 1, [](double t) { return t; });
  auto c = young_frac(BivariateKernelValues::from_scalar(grid, [](double, double) { return 3.0; }), id, 0.3);
  CHECK(c.method == IntegralMethod::FractionalRepresentation);
  CHECK(c.values.at(0, 0) == 0.0);
  for (int i : {256, 512, 1024}) CHECK(c.values.at(i, 0) == doctest::Approx(3.0 * grid.node(i)).epsilon(1e-3));
  auto s = young_frac(BivariateKernelValues::from_scalar(grid, [](double, double s) { return s; }), id, 0.3);
  for (int i : {256, 512, 1024}) {
    const double t = grid.node(i);
    CHECK(s.values.at(i, 0) == doctest::Approx(t * t / 2).epsilon(1e-3));
  }
  CHECK_THROWS_AS(young_frac(BivariateKernelValues::from_scalar(grid, [](double, double) { return 1.0; }), id, 0.6),
                  InvalidArgument);

  // Smooth Volterra kernel, fBm driver: fractional route at n = 512 against
  // the sums at 4x resolution.
  auto kernel = [](double t, double s) { return std::cos(3.0 * s) * std::exp(-(t - s)) + 0.5 * t; };
  const TimeGrid fine(1.0, 2048), coarse(1.0, 512);
  const auto gf = sample_davies_harte(fine, 0.75, 1, {9, 0});
  const auto gc = gf.subsampled(4);
  auto ref = young_rs(BivariateKernelValues::from_scalar(fine, kernel), gf);
  auto frac = young_frac(BivariateKernelValues::from_scalar(coarse, kernel), gc, 0.2);
  auto rs = young_rs(BivariateKernelValues::from_scalar(coarse, kernel), gc);
  double scale = 0.0, e_frac = 0.0, e_rs = 0.0;
  for (int i = 0; i <= 512; ++i) {
    scale = std::max(scale, std::abs(ref.values.at(4 * i, 0)));
    e_frac = std::max(e_frac, std::abs(frac.values.at(i, 0) - ref.values.at(4 * i, 0)));
    e_rs = std::max(e_rs, std::abs(rs.values.at(i, 0) - ref.values.at(4 * i, 0)));
  }
  CHECK(e_frac < 0.02 * scale);
  CHECK(e_rs < 0.02 * scale);
}

TEST_CASE("diffusion_term") {
  const TimeGrid grid(1.0, 64);
  CatalogParams p;
  p.sigma0 = 0.7;
  auto cs = builtin_coefficients("constant-sigma", 1, 1, p);
  const auto g = sample_davies_harte(grid, 0.8, 1, {3, 0});
  GridFunction x(grid, 1);
  auto r = diffusion_term(cs, x, g);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(r.values.at(i, 0) == doctest::Approx(0.7 * (g.values().at(i, 0) - g.values().at(0, 0))).epsilon(1e-12));

  CHECK(diffusion_term(builtin_coefficients("linear-drift"), x, g).values.sup_norm() == 0.0);

  // cos(0) e^{-(t-s)} against ds: left-point sums converge at first order.
  auto err = [](int n) {
    const TimeGrid gr(1.0, n);
    const auto id = deterministic_path(gr, 1, [](double t) { return t; });
    GridFunction zero(gr, 1);
    auto v = diffusion_term(builtin_coefficients("smooth-volterra"), zero, id).values;
    return max_abs_diff(v, [](double t) { return 1.0 - std::exp(-t); });
  };
  CHECK(err(128) < 5e-3);
  CHECK(err(64) / err(128) == doctest::Approx(2.0).epsilon(0.05));

  auto frac = diffusion_term_frac(builtin_coefficients("smooth-volterra"), x, g, 0.3);
  auto rs = diffusion_term(builtin_coefficients("smooth-volterra"), x, g);
  CHECK(std::abs(frac.values.at(64, 0) - rs.values.at(64, 0)) < 0.05 * std::max(1.0, std::abs(rs.values.at(64, 0))));
}

TEST_CASE("young_rs is bilinear") {
  const TimeGrid grid(1.0, 40);
  const auto g1 = sample_davies_harte(grid, 0.7, 1, {1, 0});
  const auto g2 = sample_davies_harte(grid, 0.7, 1, {2, 0});
  const DriverPath gsum(g1.values() + 2.0 * g2.values(), std::nullopt);
  auto f1 = BivariateKernelValues::from_scalar(grid, [](double t, double s) { return std::sin(t + 2 * s); });
  auto f2 = BivariateKernelValues::from_scalar(grid, [](double t, double s) { return t * s - 1; });
  auto fsum = BivariateKernelValues::from_scalar(grid, [](double t, double s) { return std::sin(t + 2 * s) - 3 * (t * s - 1); });
  auto lhs = young_rs(f1, gsum).values;
  auto rhs = young_rs(f1, g1).values + 2.0 * young_rs(f1, g2).values;
  auto lhs2 = young_rs(fsum, g1).values;
  auto rhs2 = young_rs(f1, g1).values - 3.0 * young_rs(f2, g1).values;
  for (int i = 0; i < grid.size(); ++i) {
    CHECK(lhs.at(i, 0) == doctest::Approx(rhs.at(i, 0)).scale(1.0));
    CHECK(lhs2.at(i, 0) == doctest::Approx(rhs2.at(i, 0)).scale(1.0));
  }
}
