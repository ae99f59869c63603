#include "vfbm/fraccalc.hpp"

#include <cmath>
#include <string>

namespace vfbm {

FracParams::FracParams(double alpha, double T) : alpha(alpha), T(T) {
  require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2), got " + std::to_string(alpha));
  require(T > 0.0, "horizon must be positive");
}

std::vector<double> left_frac_derivative(const GridFunction& f, const FracParams& p, int i) {
  require(i > 0 && i < f.size(), "left fractional derivative needs a positive node");
  const double a = p.alpha, s = f.grid().node(i);
  ProductRule rule(f.grid().step(), a + 1.0, i);
  std::vector<double> out(f.dim()), v(i + 1);
  for (int k = 0; k < f.dim(); ++k) {
    for (int j = 0; j <= i; ++j) v[j] = f.at(i, k) - f.at(j, k);
    out[k] = (f.at(i, k) / std::pow(s, a) + a * rule.integrate_right(v)) / std::tgamma(1.0 - a);
  }
  return out;
}

std::vector<double> scaled_left_frac_derivative(std::span<const double> f, double h, double alpha) {
  const int k = static_cast<int>(f.size()) - 1;
  std::vector<double> out(k + 1);
  const double inv_g = 1.0 / std::tgamma(1.0 - alpha);
  out[0] = f[0] * inv_g;
  if (k == 0) return out;
  ProductRule rule(h, alpha + 1.0, k);
  std::vector<double> v(k + 1);
  for (int i = 1; i <= k; ++i) {
    for (int j = 0; j <= i; ++j) v[j] = f[i] - f[j];
    const double integral = rule.integrate_right(std::span<const double>(v.data(), i + 1));
    out[i] = (f[i] + alpha * std::pow(i * h, alpha) * integral) * inv_g;
  }
  return out;
}

double right_weyl_derivative(std::span<const double> g, double h, double alpha, int s, int t) {
  require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
  require(0 <= s && s < t && t < static_cast<int>(g.size()), "Weyl derivative needs node indices s < t");
  ProductRule rule(h, 2.0 - alpha, t - s);
  std::vector<double> v(t - s + 1);
  for (int j = s; j <= t; ++j) v[j - s] = g[s] - g[j];
  const double dt = (t - s) * h;
  return ((g[s] - g[t]) / std::pow(dt, 1.0 - alpha) + (1.0 - alpha) * rule.integrate_left(v)) / std::tgamma(alpha);
}

LambdaAlpha lambda_alpha(std::span<const double> g, double h, double alpha) {
  require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
  require(g.size() >= 3, "driver needs at least two intervals");
  const auto sweep = kernels::parallel::weyl_sweep(g, h, alpha);
  const double g1 = std::tgamma(1.0 - alpha), ga = std::tgamma(alpha);
  return {sweep.weyl.value / g1, sweep.seminorm.value / (g1 * ga), sweep.seminorm.value, sweep.weyl};
}

double beta_fn(double p, double q) {
  require(p > 0.0 && q > 0.0, "Beta function needs positive arguments");
  return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

}  // namespace vfbm
