#include "vfbm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vfbm/kernels.hpp"

namespace vfbm {

HolderParams::HolderParams(double H, double alpha, double lambda, double T) : H(H), alpha(alpha), lambda(lambda), T(T) {
  require(H > 0.5 && H < 1.0, "Hurst parameter must lie in (1/2, 1), got " + std::to_string(H));
  require(alpha > 1.0 - H && alpha < 0.5, "alpha must lie in (1-H, 1/2), got " + std::to_string(alpha));
  require(lambda >= 1.0, "lambda must be >= 1, got " + std::to_string(lambda));
  require(T > 0.0, "horizon must be positive");
}

namespace {

void check_alpha(double alpha) { require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)"); }

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

NormReport weighted_norm(const GridFunction& f, double alpha, double lambda) {
  const auto integrals = increment_integrals(f, alpha);
  NormReport r;
  r.log_value = -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    const double sup = euclid(f.point(i));
    const double agg = sup + integrals[i];
    const double t = f.grid().node(i);
    const double lv = agg > 0.0 ? std::log(agg) - lambda * t : -std::numeric_limits<double>::infinity();
    if (lv > best) {
      best = lv;
      r.sup_argmax = i;
      r.sup_part = sup;
      r.integral_part = integrals[i];
    }
  }
  r.log_value = best;
  r.value = (r.sup_part + r.integral_part) * std::exp(-lambda * f.grid().node(r.sup_argmax));
  return r;
}

}  // namespace

std::vector<double> increment_integrals(const GridFunction& f, double alpha, double power) {
  std::vector<double> out(f.size());
  kernels::parallel::increment_profile(f.values(), f.dim(), f.grid().step(), alpha + 1.0, power, out);
  return out;
}

NormReport w_alpha_infty_norm(const GridFunction& f, double alpha) {
  check_alpha(alpha);
  return weighted_norm(f, alpha, 0.0);
}

NormReport w_alpha_lambda_norm(const GridFunction& f, double alpha, double lambda) {
  check_alpha(alpha);
  require(lambda >= 1.0, "weighted norm needs lambda >= 1, got " + std::to_string(lambda));
  return weighted_norm(f, alpha, lambda);
}

double holder_norm(const GridFunction& f, double exponent) {
  require(exponent > 0.0 && exponent <= 1.0, "Holder exponent must lie in (0, 1]");
  return f.sup_norm() + kernels::parallel::holder_sweep(f.values(), f.dim(), f.grid().step(), exponent).value;
}

double w_1malpha_norm(std::span<const double> g, double h, double alpha) {
  check_alpha(alpha);
  return kernels::parallel::weyl_sweep(g, h, alpha).seminorm.value;
}

double alpha_1_norm(const GridFunction& f, double alpha) {
  check_alpha(alpha);
  const double h = f.grid().step();
  std::vector<double> mag(f.size());
  for (int i = 0; i < f.size(); ++i) mag[i] = euclid(f.point(i));
  ProductRule rule(h, alpha, f.grid().intervals());
  return rule.integrate_left(mag) + trapezoid(increment_integrals(f, alpha), h);
}

double delta_functional(const GridFunction& f, double alpha, double delta) {
  check_alpha(alpha);
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  const auto prof = increment_integrals(f, alpha, delta);
  return *std::max_element(prof.begin(), prof.end());
}

HolderEstimate holder_exponent_estimate(const GridFunction& f) {
  const int n = f.grid().intervals();
  require(n >= 64, "Holder exponent estimate needs n >= 64");
  const double h = f.grid().step();
  // Weighted by the number of non-overlapping windows at each lag: the
  // medians at long lags rest on few effectively independent increments.
  std::vector<double> xs, ys, ws, diffs;
  for (int k = 1; k <= n / 8; k *= 2) {
    diffs.clear();
    for (int i = 0; i + k <= n; ++i) {
      double s = 0.0;
      for (int c = 0; c < f.dim(); ++c) s += std::pow(f.at(i + k, c) - f.at(i, c), 2);
      diffs.push_back(std::sqrt(s));
    }
    auto mid = diffs.begin() + diffs.size() / 2;
    std::nth_element(diffs.begin(), mid, diffs.end());
    double med = *mid;
    if (diffs.size() % 2 == 0) med = 0.5 * (med + *std::max_element(diffs.begin(), mid));
    if (med > 0.0) {
      xs.push_back(std::log(k * h));
      ys.push_back(std::log(med));
      ws.push_back(static_cast<double>(n / k));
    }
  }
  if (xs.size() < 2) return {1.0, true};
  double mx = 0.0, my = 0.0, sw = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) mx += ws[i] * xs[i], my += ws[i] * ys[i], sw += ws[i];
  mx /= sw;
  my /= sw;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
  }
  return {sxy / sxx, false};
}

}  // namespace vfbm
