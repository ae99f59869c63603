#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vfbm/report.hpp"

namespace vfbm {

/// (t, s, x) -> out. Output layouts:
///   sigma, sigma_dt        d x m, row-major
///   sigma_dx, sigma_dxt    d blocks of d x m; block i is the x_i partial
///   drift                  d
using Evaluator = std::function<void(double t, double s, std::span<const double> x, std::span<double> out)>;

/// Declared constants of the diffusion/drift/growth hypotheses. Radius-
/// dependent constants are functions of N.
struct HypothesisConstants {
  double K = 0.0;                      // global sigma constant
  std::function<double(double)> K_N;   // local Holder constant of the x-partials
  double beta = 1.0;                   // Holder order in s
  double mu = 1.0;                     // Holder order in t (shared by sigma and b)
  double delta = 1.0;                  // Holder order of the x-partials
  double L = 0.0;                      // drift Holder constant in t
  std::function<double(double)> L_N;   // drift local Lipschitz constant
  double L0 = 0.0;                     // drift linear growth
  // sup_t (\int_0^t |b0(t,u)|^{1/alpha} du)^alpha as a function of alpha.
  std::function<double(double)> b0_bound;
  double gamma = 0.0;                  // growth exponent
  double K0 = 0.0;                     // growth constant

  /// Integrability order used for b0 at fractional order alpha.
  static double rho(double alpha) { return 1.0 / alpha; }
};

struct CoefficientSet {
  std::string name;
  int d = 1;
  int m = 1;
  Evaluator sigma, sigma_dx, sigma_dt, sigma_dxt, drift;
  // |b0(t, s)|, the free term of the drift growth bound.
  std::function<double(double, double)> b0;
  HypothesisConstants constants;

  /// Frobenius norm of sigma(0, 0, 0).
  double sigma_at_origin() const;
};

struct CatalogParams {
  double a = 1.0;       // diffusion amplitude
  double c = 1.0;       // drift amplitude (bounded-growth uses c / 2)
  double kappa = 1.0;   // linear drift rate
  double sigma0 = 1.0;  // constant diffusion level
  double gamma = 0.5;   // bounded-growth exponent, in (0, 1)
};

/// Names accepted by builtin_coefficients.
std::vector<std::string> catalog_names();

/// "constant-sigma", "linear-drift", "smooth-volterra", "bounded-growth".
/// The last two are diagonal and need d == m.
CoefficientSet builtin_coefficients(const std::string& name, int d = 1, int m = 1, const CatalogParams& params = {});

/// Samples every item of the sigma, drift and growth hypotheses at random
/// arguments with |x|, |y| <= N and s <= t, and reports lhs / rhs per item.
/// Bounded-growth models get an extra wide-range growth sweep.
EstimateReport verify_hypotheses(const CoefficientSet& cs, long sample_count, double N, std::uint64_t seed,
                                 double T = 1.0);

/// Central differences of sigma against the declared partials. Relative
/// error (to max(|declared|, 1)) must stay within max(1e-6, 10 step^2).
EstimateReport partials_fd_check(const CoefficientSet& cs, long sample_count, std::uint64_t seed, double T = 1.0,
                                 double step = 1e-4);

}  // namespace vfbm
