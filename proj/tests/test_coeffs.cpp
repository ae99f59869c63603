#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "vfbm/coeffs.hpp"
#include "vfbm/error.hpp"

using namespace vfbm;

namespace {

const CheckItem& item(const EstimateReport& r, const std::string& name) {
  auto it = std::find_if(r.items.begin(), r.items.end(), [&](const CheckItem& c) { return c.name == name; });
  REQUIRE(it != r.items.end());
  return *it;
}

}  // namespace

TEST_CASE("catalog") {
  const auto names = catalog_names();
  CHECK(names.size() == 4);
  for (const auto& n : names) CHECK(builtin_coefficients(n).name == n);
  CHECK_THROWS_AS(builtin_coefficients("cubic"), CatalogError);
  CHECK_THROWS_AS(builtin_coefficients("smooth-volterra", 2, 1), InvalidArgument);

  CatalogParams p;
  p.sigma0 = 1.5;
  const auto cs = builtin_coefficients("constant-sigma", 1, 1, p);
  CHECK(cs.constants.K == 0.0);
  CHECK(cs.constants.K_N(10.0) == 0.0);
  CHECK(cs.constants.gamma == 0.0);
  CHECK(cs.constants.K0 == doctest::Approx(1.5));
  CHECK(cs.sigma_at_origin() == doctest::Approx(1.5));

  const auto lin = builtin_coefficients("linear-drift");
  CHECK(lin.constants.L_N(1.0) == 1.0);
  CHECK(lin.constants.L_N(1e6) == 1.0);
  CHECK(lin.constants.L0 == 1.0);
  CHECK(lin.b0(0.7, 0.2) == 0.0);
  CHECK(lin.constants.b0_bound(0.3) == 0.0);

  const auto sv = builtin_coefficients("smooth-volterra");
  CHECK(sv.constants.delta == 1.0);
  CHECK(sv.constants.beta == 1.0);
  CHECK(sv.constants.mu == 1.0);
  std::vector<double> out(1), x{0.0};
  sv.sigma(0.5, 0.5, x, out);
  CHECK(out[0] == doctest::Approx(1.0));
  sv.drift(0.5, 0.0, std::vector<double>{M_PI / 2}, out);
  CHECK(out[0] == doctest::Approx(1.0 / 1.5));

  CHECK(HypothesisConstants::rho(0.25) == 4.0);
}

TEST_CASE("every catalog entry passes its hypothesis audit") {
  for (const auto& name : catalog_names())
    for (int d : {1, 2}) {
      if (name == "linear-drift" && d == 2) continue;
      const auto cs = builtin_coefficients(name, d, d);
      for (double N : {1.0, 10.0}) {
        CAPTURE(name);
        CAPTURE(d);
        CAPTURE(N);
        const auto r = verify_hypotheses(cs, 20000, N, 11);
        CHECK(r.passed);
        CHECK(r.max_ratio <= 1.0 + 1e-9);
        const auto fd = partials_fd_check(cs, 2000, 12);
        CHECK(fd.passed);
      }
    }
}

TEST_CASE("sharp and trivial hypothesis ratios") {
  const auto lin = verify_hypotheses(builtin_coefficients("linear-drift"), 5000, 3.0, 1);
  CHECK(item(lin, "H2.1").max_ratio == doctest::Approx(1.0).epsilon(1e-9));
  const auto cs = verify_hypotheses(builtin_coefficients("constant-sigma"), 5000, 10.0, 2);
  CHECK(cs.passed);
  const auto bg = verify_hypotheses(builtin_coefficients("bounded-growth"), 5000, 10.0, 3);
  CHECK(item(bg, "H3.wide").max_ratio <= 1.0);
  CHECK_THROWS_AS(verify_hypotheses(builtin_coefficients("linear-drift"), 0, 1.0, 1), InvalidArgument);
}

TEST_CASE("finite differences of the declared partials") {
  const auto cs = builtin_coefficients("constant-sigma");
  const auto r = partials_fd_check(cs, 500, 4);
  CHECK(r.passed);
  CHECK(r.max_ratio == 0.0);

  // Truncation-dominated d_x error quarters when the step halves. Ratios are
  // relative to the tolerance 10 step^2, so they stay put.
  const auto sv = builtin_coefficients("smooth-volterra");
  const double e1 = item(partials_fd_check(sv, 2000, 5, 1.0, 1e-3), "d_x").max_ratio * 1e-5;
  const double e2 = item(partials_fd_check(sv, 2000, 5, 1.0, 5e-4), "d_x").max_ratio * 2.5e-6;
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(item(partials_fd_check(sv, 2000, 5), "d_x").max_ratio <= 1.0);

  auto bad = sv;
  bad.sigma_dt = [f = sv.sigma_dt](double t, double s, std::span<const double> x, std::span<double> out) {
    f(t, s, x, out);
    out[0] += 1.0;
  };
  const auto rb = partials_fd_check(bad, 200, 6);
  CHECK_FALSE(rb.passed);
  CHECK_FALSE(item(rb, "d_t").passed);
  CHECK(item(rb, "d_x").passed);
}
