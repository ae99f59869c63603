#pragma once

#include "vfbm/coeffs.hpp"

namespace vfbm {

/// Closed-form constants of the drift and diffusion operator estimates,
/// assembled from the declared hypothesis constants at order alpha, horizon
/// T and sup-norm radius N.
struct OperatorConstants {
  double alpha = 0.0, T = 0.0, N = 0.0;

  // Lebesgue-Volterra operator.
  double C1 = 0.0;  // T^a + 1/a
  double C2 = 0.0;  // L / (mu - a)
  double d1 = 0.0;  // Holder bound of the drift term
  double d2 = 0.0;  // weighted-norm bound of the drift term
  double dN = 0.0;  // drift Lipschitz constant in the weighted norm

  // Generalized Stieltjes operator.
  double C3 = 0.0;       // 1 / (mu - a)
  double C4 = 0.0;       // max(B(2a, 1-a), 1) + T^a
  double C_alpha = 0.0;  // 1/(1-2a) + 4, the bound used in place of the exact kernel constant
  double K1 = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0, K5 = 0.0, K6 = 0.0, K7 = 0.0, K8 = 0.0, K9 = 0.0;
  double d3 = 0.0;        // Holder bound of the diffusion term, recomputed assembly
  double d3_paper = 0.0;  // same bound assembled from the K1 display
  double d4 = 0.0;        // weighted-norm bound of the diffusion term
  double dN_prime = 0.0;  // diffusion Lipschitz constant in the weighted norm
};

/// Requires 0 < alpha < 1/2, alpha < mu and alpha < beta.
OperatorConstants operator_constants(const CoefficientSet& cs, double alpha, double T, double N);

/// d_N / lambda^{1-a} + lambda_g d'_N (1 + 2 delta_bound) / lambda^{1-2a}.
double contraction_factor(const OperatorConstants& c, double lambda_g, double delta_bound, double lambda);

/// sup_{t >= 0} t^p e^{-lambda t} = (p / (e lambda))^p.
double sup_power_exp(double p, double lambda);

}  // namespace vfbm
