#pragma once

#include <span>
#include <string>

#include "vfbm/fbm.hpp"
#include "vfbm/grid.hpp"

namespace vfbm {

struct CoefficientSet;

enum class IntegralMethod { RiemannStieltjesSum, FractionalRepresentation, LebesgueProductRule };

std::string to_string(IntegralMethod m);

struct IntegralResult {
  GridFunction values;  // t_i -> integral up to t_i; zero at t_0
  IntegralMethod method;
};

/// F_t(f) = \int_0^t f(t, s) ds by the trapezoid rule on each row.
IntegralResult lebesgue_volterra(const BivariateKernelValues& f);

/// Kernel (t_i, t_j) -> b(t_i, t_j, x(t_j)) for j <= i.
BivariateKernelValues drift_kernel(const CoefficientSet& cs, const GridFunction& x);
/// Kernel (t_i, t_j) -> sigma(t_i, t_j, x(t_j)), d x m blocks.
BivariateKernelValues diffusion_kernel(const CoefficientSet& cs, const GridFunction& x);

/// F^{(b)}_t(x) = \int_0^t b(t, s, x(s)) ds.
IntegralResult drift_term(const CoefficientSet& cs, const GridFunction& x);

/// Left-point sums sum_{j<i} f(t_i, t_j) (g(t_{j+1}) - g(t_j)); f blocks are
/// rows x m and contract against the m driver components.
IntegralResult young_rs(const BivariateKernelValues& f, const DriverPath& g);

/// Fractional representation
///   \int_0^t f dg = - \int_0^t (D^a_{0+} f(t,.))(s) (D^{1-a}_{t-} g_{t-})(s) ds
/// in the real convention (the phases (-1)^a (-1)^{1-a} multiply to -1).
/// Quadrature: s^{-a} weight handled by product integration, Weyl values
/// tabulated once per driver component.
IntegralResult young_frac(const BivariateKernelValues& f, const DriverPath& g, double alpha);

/// Same as young_frac for an integrand that does not depend on t.
IntegralResult young_frac(const GridFunction& f, const DriverPath& g, double alpha);

/// G^{(sigma)}_t(x) = \int_0^t sigma(t, s, x(s)) dg_s by left-point sums.
IntegralResult diffusion_term(const CoefficientSet& cs, const GridFunction& x, const DriverPath& g);
/// Cross-check of diffusion_term through the fractional representation.
IntegralResult diffusion_term_frac(const CoefficientSet& cs, const GridFunction& x, const DriverPath& g, double alpha);

}  // namespace vfbm
