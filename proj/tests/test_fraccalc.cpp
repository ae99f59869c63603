#include <doctest.h>

#include <cmath>
#include <random>

#include "vfbm/fbm.hpp"
#include "vfbm/fraccalc.hpp"
#include "vfbm/norms.hpp"

using namespace vfbm;

TEST_CASE("frac params") {
  CHECK_NOTHROW(FracParams(0.25, 1.0));
  CHECK_THROWS_AS(FracParams(0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(FracParams(0.0, 1.0), InvalidArgument);
}

TEST_CASE("left fractional derivative") {
  const auto g = build_grid(1.0, 64);
  const FracParams p(0.25, 1.0);
  SUBCASE("constant") {
    const auto f = GridFunction::from_scalar(g, [](double) { return 3.0; });
    CHECK(left_frac_derivative(f, p, 64)[0] == doctest::Approx(3.0 / std::tgamma(0.75)).epsilon(1e-12));
    CHECK(left_frac_derivative(f, p, 32)[0] == doctest::Approx(3.0 * std::pow(0.5, -0.25) / std::tgamma(0.75)).epsilon(1e-12));
  }
  SUBCASE("identity gives s^{1-a} / Gamma(2-a)") {
    const auto f = GridFunction::from_scalar(g, [](double s) { return s; });
    CHECK(left_frac_derivative(f, p, 64)[0] == doctest::Approx(1.0 / std::tgamma(1.75)).epsilon(1e-12));
    CHECK(1.0 / std::tgamma(1.75) == doctest::Approx(1.0880).epsilon(1e-4));
  }
  SUBCASE("zero") {
    const GridFunction f(g, 2);
    const auto v = left_frac_derivative(f, p, 10);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }
  SUBCASE("s = 0 rejected") {
    const GridFunction f(g, 1);
    CHECK_THROWS_AS(left_frac_derivative(f, p, 0), InvalidArgument);
  }
  SUBCASE("scaled form agrees") {
    const auto f = GridFunction::from_scalar(g, [](double s) { return std::sin(4 * s) + 1; });
    const auto scaled = scaled_left_frac_derivative(f.component(0), g.step(), 0.25);
    CHECK(scaled[0] == doctest::Approx(1.0 / std::tgamma(0.75)));
    for (int i : {1, 17, 64})
      CHECK(scaled[i] == doctest::Approx(std::pow(g.node(i), 0.25) * left_frac_derivative(f, p, i)[0]).epsilon(1e-12));
  }
}

TEST_CASE("right Weyl derivative") {
  const auto g = build_grid(1.0, 64);
  const double h = g.step();
  const std::vector<double> c(65, 2.0);
  CHECK(right_weyl_derivative(c, h, 0.25, 3, 40) == 0.0);
  std::vector<double> lin(65);
  for (int i = 0; i <= 64; ++i) lin[i] = g.node(i);
  CHECK(std::abs(right_weyl_derivative(lin, h, 0.25, 0, 64)) == doctest::Approx(1.0 / std::tgamma(1.25)).epsilon(1e-12));
  CHECK(1.0 / std::tgamma(1.25) == doctest::Approx(1.1033).epsilon(1e-4));
  CHECK(std::abs(right_weyl_derivative(lin, h, 0.25, 16, 48)) ==
        doctest::Approx(std::pow(0.5, 0.25) / std::tgamma(1.25)).epsilon(1e-12));
  CHECK_THROWS_AS(right_weyl_derivative(lin, h, 0.25, 5, 5), InvalidArgument);

  // Linearity on random data.
  Rng rng(4);
  std::normal_distribution<double> z;
  std::vector<double> a(65), b(65), mix(65);
  for (int i = 0; i <= 64; ++i) a[i] = z(rng), b[i] = z(rng), mix[i] = 2 * a[i] - 3 * b[i];
  CHECK(right_weyl_derivative(mix, h, 0.3, 7, 50) ==
        doctest::Approx(2 * right_weyl_derivative(a, h, 0.3, 7, 50) - 3 * right_weyl_derivative(b, h, 0.3, 7, 50)));
}

TEST_CASE("lambda alpha") {
  SUBCASE("constant driver") {
    const std::vector<double> c(33, 1.5);
    CHECK(lambda_alpha(c, 1.0 / 32, 0.25).value == 0.0);
  }
  SUBCASE("linear driver") {
    const auto g = build_grid(1.0, 256);
    std::vector<double> lin(257);
    for (int i = 0; i <= 256; ++i) lin[i] = g.node(i);
    const auto L = lambda_alpha(lin, g.step(), 0.25);
    const double exact = 1.0 / (std::tgamma(0.75) * std::tgamma(1.25));
    CHECK(exact == doctest::Approx(0.9003).epsilon(1e-4));
    CHECK(L.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(L.argmax.first == 0);
    CHECK(L.argmax.second == 256);
    CHECK(L.value <= L.upper_bound);
  }
  SUBCASE("bracket on fBm paths and refinement") {
    const auto g = build_grid(1.0, 1024);
    for (std::uint64_t p = 0; p < 5; ++p) {
      const auto w = sample_davies_harte(g, 0.75, 1, {77, p});
      const auto fine = lambda_alpha(w.component(0), g.step(), 0.35);
      const auto coarse = lambda_alpha(w.subsampled(2).component(0), 2 * g.step(), 0.35);
      CHECK(std::isfinite(fine.value));
      CHECK(fine.value <= fine.upper_bound);
      CHECK(coarse.value <= fine.value * 1.01);
    }
  }
}

TEST_CASE("beta function") {
  CHECK(beta_fn(1, 1) == doctest::Approx(1.0));
  CHECK(beta_fn(0.5, 0.5) == doctest::Approx(M_PI).epsilon(1e-13));
  CHECK(beta_fn(2, 0.75) == doctest::Approx(1.0 / 1.3125).epsilon(1e-13));
  CHECK_THROWS_AS(beta_fn(0, 1), InvalidArgument);
  CHECK_THROWS_AS(beta_fn(1, -0.5), InvalidArgument);
}

TEST_CASE("Beta integral identity on the grid") {
  // \int_0^t (t-u)^q u^p du = B(p+1, q+1) t^{p+q+1}, split so each half has one singular end.
  const int cells = 2000;
  for (double p : {-0.4, 0.3, 1.5})
    for (double q : {-0.3, 0.0, 1.9}) {
      const double t = 1.7, h = 0.5 * t / cells;
      std::vector<double> left(cells + 1), right(cells + 1);
      for (int k = 0; k <= cells; ++k) left[k] = std::pow(t - k * h, q), right[k] = std::pow(0.5 * t + k * h, p);
      const double quad = ProductRule(h, -p, cells).integrate_left(left) + ProductRule(h, -q, cells).integrate_right(right);
      CHECK(quad == doctest::Approx(beta_fn(p + 1, q + 1) * std::pow(t, p + q + 1)).epsilon(1e-6));
    }
}
