#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vfbm/fbm.hpp"

using namespace vfbm;

TEST_CASE("fbm covariance oracles") {
  CHECK(fbm_covariance(1, 1, 0.75) == doctest::Approx(1.0));
  CHECK(fbm_covariance(1, 2, 0.5) == doctest::Approx(1.0));
  CHECK(fbm_covariance(1, 2, 0.75) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fbm_covariance(0.3, 0.7, 0.6) == fbm_covariance(0.7, 0.3, 0.6));
  CHECK_THROWS_AS(fbm_covariance(1, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(fbm_covariance(1, 1, 0.0), InvalidArgument);
  // Self-similarity of the covariance: R(cs, ct) = c^{2H} R(s, t).
  CHECK(fbm_covariance(0.6, 1.4, 0.7) == doctest::Approx(std::pow(2.0, 1.4) * fbm_covariance(0.3, 0.7, 0.7)));
}

TEST_CASE("seed derivation") {
  CHECK(stream_seed(1, 0, 0) != stream_seed(1, 1, 0));
  CHECK(stream_seed(1, 0, 0) != stream_seed(1, 0, 1));
  CHECK(stream_seed(1, 0, 0) != stream_seed(2, 0, 0));
  CHECK(stream_seed(7, 3, 2) == stream_seed(7, 3, 2));
}

TEST_CASE("samplers start at zero and are deterministic") {
  const auto g = build_grid(1.0, 2);
  for (double H : {0.3, 0.6, 0.9}) {
    const auto a = sample_cholesky(g, H, 2, {5, 1});
    CHECK(a.values().at(0, 0) == 0.0);
    CHECK(a.values().at(0, 1) == 0.0);
  }
  const auto g8 = build_grid(1.0, 8);
  for (int rep = 0; rep < 2; ++rep) {
    CHECK(sample_cholesky(g8, 0.75, 3, {9, 4}).values().values()[5] ==
          sample_cholesky(g8, 0.75, 3, {9, 4}).values().values()[5]);
  }
  const auto d1 = sample_davies_harte(g8, 0.75, 2, {9, 4});
  const auto d2 = sample_davies_harte(g8, 0.75, 2, {9, 4});
  CHECK(d1.values().values().size() == d2.values().values().size());
  bool same = true;
  for (size_t k = 0; k < d1.values().values().size(); ++k) same = same && d1.values().values()[k] == d2.values().values()[k];
  CHECK(same);
  CHECK(d1.values().at(0, 0) == 0.0);
  CHECK(d1.hurst() == 0.75);
  // Components are independent streams.
  CHECK(d1.values().at(8, 0) != d1.values().at(8, 1));
}

TEST_CASE("Brownian limit of the circulant sampler") {
  const auto g = build_grid(1.0, 64);
  const DaviesHarteSampler s(g, 0.5);
  double cross = 0.0, sq = 0.0;
  const int paths = 4000;
  for (int p = 0; p < paths; ++p) {
    const auto inc = s.sample(1, {11, static_cast<std::uint64_t>(p)}).increments();
    for (size_t k = 0; k + 1 < inc.size(); ++k) cross += inc[k] * inc[k + 1];
    for (double v : inc) sq += v * v;
  }
  const double pairs = paths * 63.0;
  const double rho = cross / pairs / (sq / (paths * 64.0));
  // Lag-1 correlation of i.i.d. increments: standard error 1/sqrt(pairs).
  CHECK(std::abs(rho) < 4.0 / std::sqrt(pairs));
}

TEST_CASE("terminal variance of the circulant sampler") {
  const auto g = build_grid(1.0, 512);
  const DaviesHarteSampler s(g, 0.75);
  const int paths = 20000;
  double sum = 0.0, sum4 = 0.0;
  for (int p = 0; p < paths; ++p) {
    const double v = s.sample(1, {3, static_cast<std::uint64_t>(p)}).values().at(512, 0);
    sum += v * v;
    sum4 += v * v * v * v;
  }
  const double mean = sum / paths, se = std::sqrt((sum4 / paths - mean * mean) / paths);
  CHECK(std::abs(mean - 1.0) < 4.0 * se);
}

TEST_CASE("covariance audit agrees for both samplers") {
  const auto g = build_grid(1.0, 8);
  const auto a = covariance_audit(g, 0.75, 20000, 21, SamplerKind::Cholesky);
  const auto b = covariance_audit(g, 0.75, 20000, 21, SamplerKind::DaviesHarte);
  CHECK(a.entries.size() == 36);
  CHECK(a.max_z < 4.0);
  CHECK(b.max_z < 4.0);
  std::ostringstream os;
  write_covariance_csv(os, g, a);
  CHECK(os.str().rfind("i,j,s,t,empirical,exact,stderr,z\n", 0) == 0);
}

TEST_CASE("path csv") {
  const auto g = build_grid(1.0, 2);
  const auto p = deterministic_path(g, 2, [](double t) { return t / 3; });
  std::ostringstream os;
  write_path_csv(os, p);
  CHECK(os.str() == "t,g1,g2\n0,0,0\n0.5,0.16666666666666666,0.16666666666666666\n1,0.33333333333333331,0.33333333333333331\n");
  CHECK_FALSE(p.hurst().has_value());
  CHECK(p.increments().size() == 4);
}
