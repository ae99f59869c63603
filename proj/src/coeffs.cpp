#include "vfbm/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vfbm/error.hpp"
#include "vfbm/fbm.hpp"

namespace vfbm {

namespace {

double frob(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void fill_zero(std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); }

std::function<double(double)> constant_fn(double v) {
  return [v](double) { return v; };
}

Evaluator zero_eval() {
  return [](double, double, std::span<const double>, std::span<double> out) { fill_zero(out); };
}

// d x m diagonal matrix with entries f(x_i), stored row-major.
template <class F>
Evaluator diagonal(int d, int m, F f) {
  return [d, m, f](double t, double s, std::span<const double> x, std::span<double> out) {
    fill_zero(out);
    for (int i = 0; i < std::min(d, m); ++i) out[i * m + i] = f(t, s, x[i]);
  };
}

// d blocks of d x m; block i has a single nonzero entry (i, i) = f(x_i).
template <class F>
Evaluator diagonal_partial(int d, int m, F f) {
  return [d, m, f](double t, double s, std::span<const double> x, std::span<double> out) {
    fill_zero(out);
    for (int i = 0; i < std::min(d, m); ++i) out[static_cast<size_t>(i) * d * m + i * m + i] = f(t, s, x[i]);
  };
}

CoefficientSet base(const std::string& name, int d, int m) {
  CoefficientSet cs;
  cs.name = name;
  cs.d = d;
  cs.m = m;
  cs.sigma = cs.sigma_dx = cs.sigma_dt = cs.sigma_dxt = cs.drift = zero_eval();
  cs.b0 = [](double, double) { return 0.0; };
  cs.constants.K_N = constant_fn(0.0);
  cs.constants.L_N = constant_fn(0.0);
  cs.constants.b0_bound = constant_fn(0.0);
  return cs;
}

CoefficientSet constant_sigma(int d, int m, const CatalogParams& p) {
  auto cs = base("constant-sigma", d, m);
  const double s0 = p.sigma0;
  cs.sigma = diagonal(d, m, [s0](double, double, double) { return s0; });
  cs.constants.K0 = std::abs(s0) * std::sqrt(static_cast<double>(std::min(d, m)));
  return cs;
}

CoefficientSet linear_drift(int d, int m, const CatalogParams& p) {
  auto cs = base("linear-drift", d, m);
  const double k = p.kappa;
  cs.drift = [k](double, double, std::span<const double> x, std::span<double> out) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = k * x[i];
  };
  cs.constants.L_N = constant_fn(std::abs(k));
  cs.constants.L0 = std::abs(k);
  cs.constants.K0 = 1.0;  // sigma vanishes; any positive value works
  return cs;
}

void require_square(const std::string& name, int d, int m) {
  require(d == m, name + " is diagonal and needs d == m, got d=" + std::to_string(d) + " m=" + std::to_string(m));
}

// c sin(x_i) / (1 + t - s), shared by the two diagonal models.
void sine_drift(CoefficientSet& cs, double c) {
  cs.drift = [c](double t, double s, std::span<const double> x, std::span<double> out) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = c * std::sin(x[i]) / (1.0 + (t - s));
  };
  const double rd = std::sqrt(static_cast<double>(cs.d));
  cs.constants.L_N = constant_fn(std::abs(c));
  cs.constants.L = std::abs(c) * rd;
  cs.constants.L0 = std::abs(c);
}

CoefficientSet smooth_volterra(int d, int m, const CatalogParams& p) {
  require_square("smooth-volterra", d, m);
  auto cs = base("smooth-volterra", d, m);
  const double a = p.a;
  cs.sigma = diagonal(d, m, [a](double t, double s, double x) { return a * std::cos(x) * std::exp(-(t - s)); });
  cs.sigma_dt = diagonal(d, m, [a](double t, double s, double x) { return -a * std::cos(x) * std::exp(-(t - s)); });
  cs.sigma_dx =
      diagonal_partial(d, m, [a](double t, double s, double x) { return -a * std::sin(x) * std::exp(-(t - s)); });
  cs.sigma_dxt =
      diagonal_partial(d, m, [a](double t, double s, double x) { return a * std::sin(x) * std::exp(-(t - s)); });
  sine_drift(cs, p.c);
  const double rd = std::sqrt(static_cast<double>(d));
  cs.constants.K = 2.0 * std::abs(a) * rd;
  cs.constants.K_N = constant_fn(2.0 * std::abs(a));
  cs.constants.K0 = std::abs(a) * rd;
  return cs;
}

CoefficientSet bounded_growth(int d, int m, const CatalogParams& p) {
  require_square("bounded-growth", d, m);
  const double g = p.gamma;
  require(g > 0.0 && g < 1.0, "bounded-growth exponent must lie in (0, 1)");
  auto cs = base("bounded-growth", d, m);
  const double a = p.a;
  cs.sigma = diagonal(d, m, [a, g](double t, double s, double x) {
    return a * (std::pow(1.0 + x * x, 0.5 * g) + std::exp(-(t - s)));
  });
  cs.sigma_dt = diagonal(d, m, [a](double t, double s, double) { return -a * std::exp(-(t - s)); });
  cs.sigma_dx = diagonal_partial(
      d, m, [a, g](double, double, double x) { return a * g * x * std::pow(1.0 + x * x, 0.5 * g - 1.0); });
  sine_drift(cs, 0.5 * p.c);
  const double rd = std::sqrt(static_cast<double>(d));
  // sup |psi'| for psi = (1 + x^2)^{g/2}, attained at x^2 = 1 / (1 - g).
  const double dpsi = g / std::sqrt(1.0 - g) * std::pow((2.0 - g) / (1.0 - g), 0.5 * g - 1.0);
  cs.constants.K = std::abs(a) * std::max(2.0 * rd, dpsi);
  cs.constants.K_N = constant_fn(std::abs(a) * g);  // sup |psi''| = g at x = 0
  cs.constants.gamma = g;
  cs.constants.K0 = 2.0 * std::abs(a) * rd;
  return cs;
}

}  // namespace

double CoefficientSet::sigma_at_origin() const {
  std::vector<double> x(d, 0.0), out(static_cast<size_t>(d) * m);
  sigma(0.0, 0.0, x, out);
  return frob(out);
}

std::vector<std::string> catalog_names() { return {"constant-sigma", "linear-drift", "smooth-volterra", "bounded-growth"}; }

CoefficientSet builtin_coefficients(const std::string& name, int d, int m, const CatalogParams& params) {
  require(d >= 1 && m >= 1, "dimensions must be positive");
  if (name == "constant-sigma") return constant_sigma(d, m, params);
  if (name == "linear-drift") return linear_drift(d, m, params);
  if (name == "smooth-volterra") return smooth_volterra(d, m, params);
  if (name == "bounded-growth") return bounded_growth(d, m, params);
  throw CatalogError("unknown coefficient model '" + name + "'");
}

namespace {

// Rounding guard so exactly sharp inequalities are not flagged.
double guarded(double rhs) { return rhs * (1.0 + 1e-12) + 1e-14; }

std::vector<double> ball_point(Rng& rng, int d, double N) {
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  std::vector<double> x(d);
  double r2 = 0.0;
  for (auto& v : x) {
    v = z(rng);
    r2 += v * v;
  }
  const double scale = r2 > 0.0 ? N * std::pow(u(rng), 1.0 / d) / std::sqrt(r2) : 0.0;
  for (auto& v : x) v *= scale;
  return x;
}

// y near x half of the time (probes local constants), projected into the ball.
std::vector<double> partner_point(Rng& rng, const std::vector<double>& x, double N) {
  std::uniform_real_distribution<double> u;
  if (u(rng) < 0.5) return ball_point(rng, static_cast<int>(x.size()), N);
  std::normal_distribution<double> z;
  std::vector<double> y(x);
  for (auto& v : y) v += 1e-3 * std::max(N, 1.0) * z(rng);
  const double r = frob(y);
  if (r > N && r > 0.0)
    for (auto& v : y) v *= N / r;
  return y;
}

// Slices of a sigma_dx-type block set.
std::span<const double> block(const std::vector<double>& v, int i, size_t bs) { return {v.data() + i * bs, bs}; }

enum Item { H11, H12, H13, H14, H15, H21, H22, H23, H24, H3, kItems };
const char* kItemNames[kItems] = {"H1.1", "H1.2", "H1.3", "H1.4", "H1.5", "H2.1", "H2.2", "H2.3", "H2.4", "H3"};

}  // namespace

EstimateReport verify_hypotheses(const CoefficientSet& cs, long sample_count, double N, std::uint64_t seed, double T) {
  require(sample_count >= 1, "sample_count must be >= 1");
  require(N >= 0.0, "radius must be non-negative");
  const int d = cs.d, m = cs.m;
  const size_t sz = static_cast<size_t>(d) * m, psz = sz * d;
  const auto& k = cs.constants;
  const double KN = k.K_N(N), LN = k.L_N(N);

  // lhs/rhs per (sample, item, repetition); indexed items repeat d times.
  const size_t reps = d;
  std::vector<double> lhs(static_cast<size_t>(sample_count) * kItems * reps, 0.0), rhs(lhs.size(), 0.0);

#pragma omp parallel
  {
    std::vector<double> s1(sz), s2(sz), s3(sz), s4(sz), p1(psz), p2(psz), p3(psz), p4(psz), b1(d), b2(d), b3(d),
        b4(d);
#pragma omp for schedule(static)
    for (long n = 0; n < sample_count; ++n) {
      Rng rng(stream_seed(seed, static_cast<std::uint64_t>(n), 0));
      std::uniform_real_distribution<double> u;
      const double t = T * u(rng), s = t * u(rng);
      const double t1 = s + (T - s) * u(rng), t2 = s + (T - s) * u(rng);
      const double r1 = t * u(rng), r2 = t * u(rng);
      const auto x = ball_point(rng, d, N);
      const auto y = partner_point(rng, x, N);
      const double dxy = dist(x, y);
      auto put = [&](Item it, size_t r, double l, double h) {
        const size_t idx = (static_cast<size_t>(n) * kItems + it) * reps + r;
        lhs[idx] = l;
        rhs[idx] = guarded(h);
      };

      // H1.1: sigma and d_t sigma Lipschitz in x.
      cs.sigma(t, s, x, s1);
      cs.sigma(t, s, y, s2);
      cs.sigma_dt(t, s, x, s3);
      cs.sigma_dt(t, s, y, s4);
      put(H11, 0, dist(s1, s2) + dist(s3, s4), k.K * dxy);
      // H3: growth.
      put(H3, 0, frob(s1), k.K0 * (1.0 + std::pow(frob(x), k.gamma)));

      // H1.2: x-partials Holder in x.
      cs.sigma_dx(t, s, x, p1);
      cs.sigma_dx(t, s, y, p2);
      cs.sigma_dxt(t, s, x, p3);
      cs.sigma_dxt(t, s, y, p4);
      for (int i = 0; i < d; ++i)
        put(H12, i, dist(block(p1, i, sz), block(p2, i, sz)) + dist(block(p3, i, sz), block(p4, i, sz)),
            KN * std::pow(dxy, k.delta));

      // H1.3: sigma and x-partials Holder in t.
      cs.sigma(t1, s, x, s1);
      cs.sigma(t2, s, x, s2);
      cs.sigma_dx(t1, s, x, p1);
      cs.sigma_dx(t2, s, x, p2);
      const double dt = std::pow(std::abs(t1 - t2), k.mu);
      for (int i = 0; i < d; ++i) put(H13, i, dist(s1, s2) + dist(block(p1, i, sz), block(p2, i, sz)), k.K * dt);

      // H1.4 / H1.5: Holder in s.
      const double ds = std::pow(std::abs(r1 - r2), k.beta);
      cs.sigma(t, r1, x, s1);
      cs.sigma(t, r2, x, s2);
      cs.sigma_dt(t, r1, x, s3);
      cs.sigma_dt(t, r2, x, s4);
      put(H14, 0, dist(s1, s2) + dist(s3, s4), k.K * ds);
      cs.sigma_dxt(t, r1, x, p1);
      cs.sigma_dxt(t, r2, x, p2);
      cs.sigma_dx(t, r1, x, p3);
      cs.sigma_dx(t, r2, x, p4);
      for (int i = 0; i < d; ++i)
        put(H15, i, dist(block(p1, i, sz), block(p2, i, sz)) + dist(block(p3, i, sz), block(p4, i, sz)), k.K * ds);

      // Drift.
      cs.drift(t, s, x, b1);
      cs.drift(t, s, y, b2);
      put(H21, 0, dist(b1, b2), LN * dxy);
      put(H23, 0, frob(b1), k.L0 * frob(x) + cs.b0(t, s));
      cs.drift(t1, s, x, b1);
      cs.drift(t2, s, x, b2);
      put(H22, 0, dist(b1, b2), k.L * dt);
      cs.drift(t1, s, y, b3);
      cs.drift(t2, s, y, b4);
      double mixed = 0.0;
      for (int i = 0; i < d; ++i) mixed += std::pow(b1[i] - b3[i] - b2[i] + b4[i], 2);
      put(H24, 0, std::sqrt(mixed), LN * std::abs(t1 - t2) * dxy);
    }
  }

  EstimateReport report;
  report.name = "hypotheses";
  for (int it = 0; it < kItems; ++it) {
    CheckItem item;
    item.name = kItemNames[it];
    const bool indexed = it == H12 || it == H13 || it == H15;
    for (long n = 0; n < sample_count; ++n)
      for (size_t r = 0; r < (indexed ? reps : 1); ++r) {
        const size_t idx = (static_cast<size_t>(n) * kItems + it) * reps + r;
        item.record(lhs[idx], rhs[idx]);
        if (n < 4 && r == 0) report.sample(lhs[idx], rhs[idx]);
      }
    report.add(item);
  }

  if (k.gamma > 0.0) {
    // Wide sweep of the growth bound, |x| log-uniform up to 1e6.
    CheckItem wide;
    wide.name = "H3.wide";
    std::vector<double> out(sz);
    for (long n = 0; n < std::min(sample_count, 10000L); ++n) {
      Rng rng(stream_seed(seed ^ 0x5a5a5a5aULL, static_cast<std::uint64_t>(n), 0));
      std::uniform_real_distribution<double> u;
      auto x = ball_point(rng, d, 1.0);
      const double r = frob(x), target = std::pow(10.0, -3.0 + 9.0 * u(rng));
      for (auto& v : x) v *= r > 0.0 ? target / r : 0.0;
      const double t = T * u(rng), s = t * u(rng);
      cs.sigma(t, s, x, out);
      wide.record(frob(out), guarded(k.K0 * (1.0 + std::pow(frob(x), k.gamma))));
    }
    report.add(wide);
  }

  report.constant("K", k.K);
  report.constant("K_N", KN);
  report.constant("beta", k.beta);
  report.constant("mu", k.mu);
  report.constant("delta", k.delta);
  report.constant("L", k.L);
  report.constant("L_N", LN);
  report.constant("L0", k.L0);
  report.constant("gamma", k.gamma);
  report.constant("K0", k.K0);
  report.constant("N", N);
  report.finalize();
  return report;
}

EstimateReport partials_fd_check(const CoefficientSet& cs, long sample_count, std::uint64_t seed, double T,
                                 double step) {
  require(sample_count >= 1, "sample_count must be >= 1");
  require(step > 0.0, "step must be positive");
  const int d = cs.d, m = cs.m;
  const size_t sz = static_cast<size_t>(d) * m, psz = sz * d;
  const double tol = std::max(1e-6, 10.0 * step * step);

  // err[n][0..2] = worst relative error of d_x, d_t, d_xt at sample n.
  std::vector<double> err(static_cast<size_t>(sample_count) * 3, 0.0);
#pragma omp parallel
  {
    std::vector<double> dx(psz), dt(sz), dxt(psz), a(sz), b(sz), c(sz), e(sz);
#pragma omp for schedule(static)
    for (long n = 0; n < sample_count; ++n) {
      Rng rng(stream_seed(seed, static_cast<std::uint64_t>(n), 1));
      std::uniform_real_distribution<double> u;
      const double t = T * u(rng), s = t * u(rng);
      auto x = ball_point(rng, d, 3.0);
      cs.sigma_dx(t, s, x, dx);
      cs.sigma_dt(t, s, x, dt);
      cs.sigma_dxt(t, s, x, dxt);
      auto rel = [](double fd, double declared) { return std::abs(fd - declared) / std::max(std::abs(declared), 1.0); };

      double ex = 0.0, et = 0.0, ext = 0.0;
      cs.sigma(t + step, s, x, a);
      cs.sigma(t - step, s, x, b);
      for (size_t q = 0; q < sz; ++q) et = std::max(et, rel((a[q] - b[q]) / (2.0 * step), dt[q]));
      for (int i = 0; i < d; ++i) {
        auto xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        cs.sigma(t, s, xp, a);
        cs.sigma(t, s, xm, b);
        for (size_t q = 0; q < sz; ++q) ex = std::max(ex, rel((a[q] - b[q]) / (2.0 * step), dx[i * sz + q]));
        cs.sigma(t + step, s, xp, a);
        cs.sigma(t + step, s, xm, b);
        cs.sigma(t - step, s, xp, c);
        cs.sigma(t - step, s, xm, e);
        for (size_t q = 0; q < sz; ++q)
          ext = std::max(ext, rel((a[q] - b[q] - c[q] + e[q]) / (4.0 * step * step), dxt[i * sz + q]));
      }
      err[3 * n] = ex;
      err[3 * n + 1] = et;
      err[3 * n + 2] = ext;
    }
  }

  EstimateReport report;
  report.name = "partials";
  const char* names[3] = {"d_x", "d_t", "d_xt"};
  for (int q = 0; q < 3; ++q) {
    CheckItem item;
    item.name = names[q];
    for (long n = 0; n < sample_count; ++n) item.record(err[3 * n + q], tol);
    report.add(item);
  }
  report.constant("step", step);
  report.constant("tolerance", tol);
  report.finalize();
  return report;
}

}  // namespace vfbm
