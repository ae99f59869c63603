#include <doctest.h>

#include <cmath>

#include "vfbm/coeffs.hpp"
#include "vfbm/constants.hpp"
#include "vfbm/fbm.hpp"
#include "vfbm/solver.hpp"

using namespace vfbm;

TEST_CASE("admissible_alpha") {
  auto w = admissible_alpha(0.8, 0.9, 1.0, 1.0);
  CHECK(w.alpha0 == doctest::Approx(0.5));
  CHECK(w.lower == doctest::Approx(0.2));
  CHECK(w.feasible);
  CHECK(w.contains(0.3));
  CHECK_FALSE(w.contains(0.19));
  CHECK_FALSE(w.contains(0.5));

  w = admissible_alpha(0.6, 0.3, 1.0, 1.0);
  CHECK_FALSE(w.beta_ok);
  CHECK_FALSE(w.feasible);

  w = admissible_alpha(0.75, 0.5, 0.5, 0.9);
  CHECK(w.alpha0 == doctest::Approx(1.0 / 3));
  CHECK(w.lower == doctest::Approx(0.25));
  CHECK(w.delta_ok);
  CHECK(w.feasible);

  CHECK_FALSE(admissible_alpha(0.6, 1.0, 0.5, 1.0).delta_ok);  // 0.5 < 1/0.6 - 1
  CHECK_THROWS_AS(admissible_alpha(0.4, 1, 1, 1), InvalidArgument);
}

TEST_CASE("select_lambda") {
  const HolderParams params(0.8, 0.25, 1.0, 1.0);
  const auto lin = builtin_coefficients("linear-drift");
  const double dN = 1.0 + 1.0 / 0.75 + std::tgamma(0.75) / 0.25;
  CHECK(operator_constants(lin, 0.25, 1.0, 5.0).dN == doctest::Approx(dN));
  double expected = 1.0;
  while (dN / std::pow(expected, 0.75) > 0.5) expected *= 2.0;
  CHECK(select_lambda(lin, params, 1.3, 5.0, 1.0) == expected);

  CHECK(select_lambda(builtin_coefficients("constant-sigma"), params, 10.0, 5.0, 1.0) == 1.0);

  const auto sv = builtin_coefficients("smooth-volterra");
  double prev = 1.0;
  for (double lg : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double l = select_lambda(sv, params, lg, 3.0, 2.0);
    CHECK(l >= prev);
    CHECK(contraction_factor(operator_constants(sv, 0.25, 1.0, 3.0), lg, 2.0, l) <= 0.5);
    prev = l;
  }
  CHECK_THROWS_AS(select_lambda(sv, params, 1e300, 3.0, 2.0), NoContractionError);
}

TEST_CASE("Picard on the linear Volterra equation") {
  const TimeGrid grid(1.0, 1024);
  const auto g = deterministic_path(grid, 1, [](double) { return 0.0; });
  const HolderParams params(0.8, 0.3, 1.0, 1.0);
  PicardOptions opt;
  opt.tol = 1e-10;
  const auto sol = picard_solve(builtin_coefficients("linear-drift"), std::vector<double>{1.0}, g, params, opt);
  CHECK(sol.converged);
  double err = 0.0;
  for (int i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(sol.x.at(i, 0) - std::exp(grid.node(i))));
  CHECK(err < 1e-4);
  CHECK(sol.x.at(0, 0) == 1.0);
  for (size_t k = 0; k + 1 < sol.iterations; ++k) CHECK(sol.plain_distances[k] > 0.0);
}

TEST_CASE("Picard with constant diffusion reaches the fixed point at once") {
  const TimeGrid grid(1.0, 128);
  const auto g = sample_davies_harte(grid, 0.75, 1, {4, 0});
  CatalogParams p;
  p.sigma0 = 0.4;
  const auto sol = picard_solve(builtin_coefficients("constant-sigma", 1, 1, p), std::vector<double>{0.2}, g,
                                HolderParams(0.75, 0.3, 1.0, 1.0));
  CHECK(sol.converged);
  CHECK(sol.iterations == 2);  // the second step confirms a zero update
  CHECK(sol.plain_distances.back() == 0.0);
  CHECK(sol.lambda_used == 1.0);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(sol.x.at(i, 0) == doctest::Approx(0.2 + 0.4 * g.values().at(i, 0)).epsilon(1e-14));
}

TEST_CASE("Picard contraction, uniqueness and regularity on fBm") {
  const TimeGrid grid(1.0, 256);
  const HolderParams params(0.75, 0.3, 1.0, 1.0);
  const auto cs = builtin_coefficients("smooth-volterra");
  const auto g = sample_davies_harte(grid, 0.75, 1, {21, 0});
  PicardOptions opt;
  opt.tol = 1e-10;
  const auto a = picard_solve(cs, std::vector<double>{0.5}, g, params, opt);
  REQUIRE(a.converged);
  CHECK(a.contraction_factor <= 0.5);
  for (size_t k = 1; k < a.log_distances.size(); ++k) {
    if (!std::isfinite(a.log_distances[k])) continue;
    CHECK(a.log_distances[k] - a.log_distances[k - 1] <= std::log(a.contraction_factor * 1.1));
  }
  opt.initial_offset = 1.0;
  const auto b = picard_solve(cs, std::vector<double>{0.5}, g, params, opt);
  REQUIRE(b.converged);
  CHECK((a.x - b.x).sup_norm() < 10 * opt.tol);
  CHECK(a.holder_estimate >= 1 - 0.3 - 0.1);

  const auto bad = DriverPath(GridFunction(TimeGrid(2.0, 256), 1), std::nullopt);
  CHECK_THROWS_AS(picard_solve(cs, std::vector<double>{0.5}, bad, params), InvalidArgument);
  CHECK_THROWS_AS(picard_solve(cs, std::vector<double>{0.5, 1.0}, g, params), InvalidArgument);
}

TEST_CASE("Euler scheme") {
  const TimeGrid grid(1.0, 100);
  const auto g = sample_davies_harte(grid, 0.7, 1, {8, 0});
  const auto x = euler_solve(builtin_coefficients("constant-sigma"), std::vector<double>{0.3}, g);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(x.at(i, 0) == doctest::Approx(0.3 + g.values().at(i, 0) - g.values().at(0, 0)).epsilon(1e-14));

  auto err = [](int n) {
    const TimeGrid gr(1.0, n);
    const auto zero = deterministic_path(gr, 1, [](double) { return 0.0; });
    const auto y = euler_solve(builtin_coefficients("linear-drift"), std::vector<double>{1.0}, zero);
    return std::abs(y.at(n, 0) - std::exp(1.0));
  };
  CHECK(err(200) / err(400) == doctest::Approx(2.0).epsilon(0.05));

  auto blow = builtin_coefficients("linear-drift");
  blow.drift = [](double, double, std::span<const double> v, std::span<double> out) { out[0] = 1e300 * v[0] * v[0]; };
  const auto zero = deterministic_path(grid, 1, [](double) { return 0.0; });
  CHECK_THROWS_AS(euler_solve(blow, std::vector<double>{1e10}, zero), DivergenceError);
}

TEST_CASE("Picard and Euler agree under refinement") {
  const HolderParams params(0.75, 0.3, 1.0, 1.0);
  const auto cs = builtin_coefficients("smooth-volterra");
  const TimeGrid fine(1.0, 1024);
  const auto gf = sample_davies_harte(fine, 0.75, 1, {33, 0});
  std::vector<double> gaps;
  for (int factor : {4, 2, 1}) {
    const auto g = gf.subsampled(factor);
    const auto p = picard_solve(cs, std::vector<double>{0.5}, g, params);
    const auto e = euler_solve(cs, std::vector<double>{0.5}, g);
    gaps.push_back((p.x - e).sup_norm());
  }
  const double order = std::log2(gaps[0] / gaps[2]) / 2.0;
  CHECK(order >= 0.5);
}

TEST_CASE("phi_exponent") {
  CHECK(phi_exponent(0.3, 0.0) == doctest::Approx(1.0 / 0.7));
  CHECK(phi_exponent(0.3, 1.0) == doctest::Approx(2.5));
  CHECK(phi_exponent(0.3, 0.8) == doctest::Approx(2.525));
  CHECK(phi_exponent(0.3, 0.4 / 0.7) == doctest::Approx(2.525));
  CHECK_THROWS_AS(phi_exponent(0.5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(phi_exponent(0.3, 1.5), InvalidArgument);
}

TEST_CASE("growth bound") {
  const std::vector<double> norms{1.0, 2.0, 4.0}, lambdas{0.0, 1.0, 2.0};
  const auto cal = calibrate_growth(norms, lambdas, 1.0);
  CHECK(cal.C6 == doctest::Approx(std::log(2.0)));
  CHECK(cal.C5 == doctest::Approx(2.0));
  CHECK(calibrate_growth(std::vector<double>{3.0, 1.0}, std::vector<double>{0.0, 1.0}, 1.0).C6 == 0.0);
  CHECK_THROWS_AS(calibrate_growth(std::vector<double>{}, std::vector<double>{}, 1.0), InvalidArgument);

  // Deterministic linear case: the bound reduces to a constant.
  const TimeGrid grid(1.0, 128);
  const auto zero = deterministic_path(grid, 1, [](double) { return 0.0; });
  const HolderParams params(0.8, 0.3, 1.0, 1.0);
  const auto lin = builtin_coefficients("linear-drift");
  const auto sol = picard_solve(lin, std::vector<double>{1.0}, zero, params);
  const double norm = w_alpha_infty_norm(sol.x, 0.3).value;
  const auto calib = calibrate_growth(std::vector<double>{norm}, std::vector<double>{sol.lambda_alpha_g}, 1.0);
  const auto rep = growth_bound_check(sol, lin, params, calib);
  CHECK(rep.satisfied);
  CHECK(rep.norm_alpha_infty == doctest::Approx(norm));
  CHECK(rep.bound >= rep.norm_alpha_infty);

  auto no_growth = lin;
  no_growth.constants.K0 = 0.0;
  CHECK_THROWS_AS(growth_bound_check(sol, no_growth, params, calib), InvalidArgument);
}
