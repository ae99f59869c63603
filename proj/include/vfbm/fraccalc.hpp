#pragma once

#include <span>
#include <vector>

#include "vfbm/grid.hpp"
#include "vfbm/kernels.hpp"

namespace vfbm {

/// Fractional order alpha in (0, 1/2) on [0, T].
struct FracParams {
  double alpha;
  double T;
  FracParams(double alpha, double T);
};

// All fractional operators use the real-valued convention: the complex
// phase factors (-1)^alpha of the classical definitions are dropped. Only
// magnitudes enter the estimates, and the Young integral picks up a single
// overall sign (see young_frac).

/// (D^a_{0+} f)(s_i) = (f(s)/s^a + a \int_0^s (f(s)-f(y))/(s-y)^{a+1} dy) / Gamma(1-a)
/// for each component. s_i must be a positive node.
std::vector<double> left_frac_derivative(const GridFunction& f, const FracParams& p, int i);

/// s^a (D^a_{0+} f)(s) for a scalar series on nodes 0..k; the s = 0 entry is
/// the limit f(0)/Gamma(1-a).
std::vector<double> scaled_left_frac_derivative(std::span<const double> f, double h, double alpha);

/// (D^{1-a}_{t-} g_{t-})(s) = ((g(s)-g(t))/(t-s)^{1-a}
///   + (1-a) \int_s^t (g(s)-g(y))/(y-s)^{2-a} dy) / Gamma(a), node indices s < t.
double right_weyl_derivative(std::span<const double> g, double h, double alpha, int s, int t);

struct LambdaAlpha {
  double value;         // discrete sup over node pairs, divided by Gamma(1-a)
  double upper_bound;   // ||g||_{1-a,inf,T} / (Gamma(1-a) Gamma(a))
  double seminorm;      // ||g||_{1-a,inf,T}
  kernels::PairSup argmax;
};

/// Lambda_alpha of a scalar driver component. Node pairs range over
/// 0 <= s < t <= n.
LambdaAlpha lambda_alpha(std::span<const double> g, double h, double alpha);

/// B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q) through log-gamma.
double beta_fn(double p, double q);

}  // namespace vfbm
