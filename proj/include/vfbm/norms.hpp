#pragma once

#include <span>
#include <vector>

#include "vfbm/grid.hpp"

namespace vfbm {

/// (H, alpha, lambda, T) with alpha in (1-H, 1/2) and lambda >= 1.
struct HolderParams {
  double H;
  double alpha;
  double lambda;
  double T;
  HolderParams(double H, double alpha, double lambda, double T);
};

struct NormReport {
  double value = 0.0;
  int sup_argmax = 0;
  double sup_part = 0.0;       // |f(t*)|
  double integral_part = 0.0;  // increment integral at t*
  double log_value = 0.0;      // log(value); finite even when value underflows
};

/// Per-node increment integral \int_0^{t_i} |f(t_i)-f(s)|^power / (t_i-s)^{alpha+1} ds.
std::vector<double> increment_integrals(const GridFunction& f, double alpha, double power = 1.0);

/// sup_t ( |f(t)| + \int_0^t |f(t)-f(s)| / (t-s)^{alpha+1} ds ).
NormReport w_alpha_infty_norm(const GridFunction& f, double alpha);

/// sup_t e^{-lambda t} ( |f(t)| + \int_0^t |f(t)-f(s)| / (t-s)^{alpha+1} ds ), lambda >= 1.
NormReport w_alpha_lambda_norm(const GridFunction& f, double alpha, double lambda);

/// ||f||_inf + sup_{s<t} |f(t)-f(s)| / (t-s)^exponent.
double holder_norm(const GridFunction& f, double exponent);

/// sup_{s<t} ( |g(t)-g(s)|/(t-s)^{1-alpha} + \int_s^t |g(y)-g(s)|/(y-s)^{2-alpha} dy ).
double w_1malpha_norm(std::span<const double> g, double h, double alpha);

/// \int_0^T |f(s)|/s^alpha ds + \int_0^T \int_0^s |f(s)-f(y)|/(s-y)^{alpha+1} dy ds.
double alpha_1_norm(const GridFunction& f, double alpha);

/// sup_u \int_0^u |f(u)-f(s)|^delta / (u-s)^{alpha+1} ds.
double delta_functional(const GridFunction& f, double alpha, double delta);

struct HolderEstimate {
  double exponent = 1.0;
  bool zero_variation = false;
};

/// Log-log slope of the median |f(t + kh) - f(t)| against kh over dyadic lags
/// k = 1, 2, 4, ..., n/8. Needs n >= 64.
HolderEstimate holder_exponent_estimate(const GridFunction& f);

}  // namespace vfbm
