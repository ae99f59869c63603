#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfbm/coeffs.hpp"
#include "vfbm/constants.hpp"
#include "vfbm/fbm.hpp"
#include "vfbm/norms.hpp"

namespace vfbm {

struct AdmissibleWindow {
  double alpha0 = 0.0;  // min{1/2, beta, delta/(1+delta)}
  double lower = 0.0;   // max(1-H, 1-mu)
  bool beta_ok = false;   // beta > 1-H
  bool delta_ok = false;  // delta > 1/H - 1
  bool mu_ok = false;     // min{beta, delta/(1+delta)} > 1-mu
  bool feasible = false;

  bool contains(double alpha) const { return feasible && alpha > lower && alpha < alpha0; }
};

AdmissibleWindow admissible_alpha(double H, double beta, double delta, double mu);

/// Smallest lambda on the ladder 1, 2, 4, ..., 2^64 whose contraction factor
/// (with lambda_g multiplied by the number of driver components) is <= 1/2.
/// Throws NoContractionError when the ladder is exhausted.
double select_lambda(const CoefficientSet& cs, const HolderParams& params, double lambda_alpha_g, double N_bound,
                     double delta_bound);

struct PicardOptions {
  double tol = 1e-8;
  int max_iter = 200;
  std::optional<double> lambda;  // overrides select_lambda
  double initial_offset = 0.0;   // first iterate is x0 + offset in every component
};

struct SolutionRecord {
  explicit SolutionRecord(GridFunction path) : x(std::move(path)) {}

  GridFunction x;
  std::vector<double> x0;
  int iterations = 0;
  // Weighted distances ||x^{k+1} - x^k||_{a,lambda}; log values stay finite
  // when the weight underflows.
  std::vector<double> distances;
  std::vector<double> log_distances;
  // Unweighted ||x^{k+1} - x^k||_{a,inf}, the stopping quantity.
  std::vector<double> plain_distances;
  double lambda_used = 1.0;
  double lambda_alpha_g = 0.0;  // max over components
  double holder_estimate = 0.0;  // NaN when the grid is too coarse
  double contraction_factor = 0.0;
  double N_bound = 0.0;
  double delta_bound = 0.0;
  bool converged = false;
};

/// Lambda_alpha of the driver: max over its components.
double driver_lambda_alpha(const DriverPath& g, double alpha);

/// Fixed-point iteration x^{k+1} = x0 + F^{(b)}(x^k) + G^{(sigma)}(x^k) on the
/// full grid. Radii N and Delta feeding select_lambda come from a pilot
/// Euler solve: N = 2 max(|x_euler|_inf, |x0|) + 1, Delta = 2 Delta(x_euler) + 1.
SolutionRecord picard_solve(const CoefficientSet& cs, std::span<const double> x0, const DriverPath& g,
                            const HolderParams& params, const PicardOptions& options = {});

/// One-pass left-point scheme with the kernels re-evaluated at every t_i.
GridFunction euler_solve(const CoefficientSet& cs, std::span<const double> x0, const DriverPath& g);

/// Growth exponent phi(alpha, gamma); the open middle branch uses
/// (1 + 0.01) / (1 - 2 alpha).
double phi_exponent(double alpha, double gamma);

struct GrowthCalibration {
  double C5 = 1.0;
  double C6 = 0.0;
  double phi = 1.0;
  int paths = 0;
};

/// Fits log ||x||_{a,inf} <= log C5 + C6 Lambda^phi over a pilot ensemble:
/// C6 is the least-squares slope (clamped at 0), log C5 the largest residual
/// plus log 2.
GrowthCalibration calibrate_growth(std::span<const double> norms, std::span<const double> lambdas, double phi);

struct GrowthBoundReport {
  double norm_alpha_infty = 0.0;
  double lambda_alpha_g = 0.0;
  double phi = 0.0;
  double bound = 0.0;
  double C5 = 0.0;
  double C6 = 0.0;
  bool satisfied = false;
};

GrowthBoundReport growth_bound_check(const SolutionRecord& sol, const CoefficientSet& cs, const HolderParams& params,
                                     const GrowthCalibration& calibration);

/// `t,x1..xd` with 17 significant digits.
void write_solution_csv(std::ostream& os, const GridFunction& x);
/// {lambda, iterations, distances[], lambda_alpha_g, holder_estimate, converged, ...}
nlohmann::ordered_json solution_metadata(const SolutionRecord& sol);

}  // namespace vfbm
