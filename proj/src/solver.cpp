#include "vfbm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "vfbm/fraccalc.hpp"
#include "vfbm/integrals.hpp"
#include "vfbm/report.hpp"

namespace vfbm {

AdmissibleWindow admissible_alpha(double H, double beta, double delta, double mu) {
  require(H > 0.5 && H < 1.0, "Hurst parameter must lie in (1/2, 1)");
  require(beta > 0.0 && beta <= 1.0 && delta > 0.0 && delta <= 1.0 && mu > 0.0 && mu <= 1.0,
          "beta, delta and mu must lie in (0, 1]");
  AdmissibleWindow w;
  const double dd = delta / (1.0 + delta);
  w.alpha0 = std::min({0.5, beta, dd});
  w.lower = std::max(1.0 - H, 1.0 - mu);
  w.beta_ok = beta > 1.0 - H;
  w.delta_ok = delta > 1.0 / H - 1.0;
  w.mu_ok = std::min(beta, dd) > 1.0 - mu;
  w.feasible = w.lower < w.alpha0 && w.beta_ok && w.delta_ok && w.mu_ok;
  return w;
}

double select_lambda(const CoefficientSet& cs, const HolderParams& params, double lambda_alpha_g, double N_bound,
                     double delta_bound) {
  require(lambda_alpha_g >= 0.0 && N_bound >= 0.0 && delta_bound >= 0.0, "select_lambda inputs must be non-negative");
  const auto c = operator_constants(cs, params.alpha, params.T, N_bound);
  const double lg = cs.m * lambda_alpha_g;
  for (int k = 0; k <= 64; ++k) {
    const double lambda = std::ldexp(1.0, k);
    if (contraction_factor(c, lg, delta_bound, lambda) <= 0.5) return lambda;
  }
  throw NoContractionError("no lambda <= 2^64 gives a contraction factor <= 1/2 (d_N=" + std::to_string(c.dN) +
                           ", d'_N=" + std::to_string(c.dN_prime) + ")");
}

double driver_lambda_alpha(const DriverPath& g, double alpha) {
  double best = 0.0;
  for (int c = 0; c < g.components(); ++c)
    best = std::max(best, lambda_alpha(g.component(c), g.grid().step(), alpha).value);
  return best;
}

namespace {

void check_shapes(const CoefficientSet& cs, std::span<const double> x0, const DriverPath& g) {
  require(static_cast<int>(x0.size()) == cs.d, "initial condition has the wrong dimension");
  require(g.components() == cs.m, "driver has " + std::to_string(g.components()) + " components, coefficients expect " +
                                      std::to_string(cs.m));
  for (double v : x0) require(std::isfinite(v), "initial condition must be finite");
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double euclid(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

GridFunction euler_solve(const CoefficientSet& cs, std::span<const double> x0, const DriverPath& g) {
  check_shapes(cs, x0, g);
  const TimeGrid& grid = g.grid();
  const int d = cs.d, m = cs.m, n = grid.intervals();
  const double h = grid.step();
  const auto dg = g.increments();
  GridFunction x(grid, d);
  std::vector<double> b(d), sig(static_cast<size_t>(d) * m);
  for (int k = 0; k < d; ++k) x.at(0, k) = x0[k];
  for (int i = 1; i <= n; ++i) {
    auto xi = x.point(i);
    std::copy(x0.begin(), x0.end(), xi.begin());
    const double t = grid.node(i);
    for (int j = 0; j < i; ++j) {
      const double s = grid.node(j);
      cs.drift(t, s, x.point(j), b);
      cs.sigma(t, s, x.point(j), sig);
      for (int r = 0; r < d; ++r) {
        double acc = b[r] * h;
        for (int c = 0; c < m; ++c) acc += sig[r * m + c] * dg[static_cast<size_t>(j) * m + c];
        xi[r] += acc;
      }
    }
    if (!all_finite(xi)) throw DivergenceError("Euler state is not finite at t=" + std::to_string(t));
  }
  return x;
}

SolutionRecord picard_solve(const CoefficientSet& cs, std::span<const double> x0, const DriverPath& g,
                            const HolderParams& params, const PicardOptions& options) {
  check_shapes(cs, x0, g);
  require(options.tol > 0.0, "tolerance must be positive");
  require(options.max_iter >= 1, "max_iter must be >= 1");
  require(std::abs(g.grid().horizon() - params.T) <= 1e-12 * params.T, "driver horizon differs from params.T");
  const TimeGrid& grid = g.grid();
  const int d = cs.d;
  const double alpha = params.alpha;

  SolutionRecord rec(GridFunction(grid, d));
  rec.x0.assign(x0.begin(), x0.end());
  rec.lambda_alpha_g = driver_lambda_alpha(g, alpha);

  const GridFunction pilot = euler_solve(cs, x0, g);
  rec.N_bound = 2.0 * std::max(pilot.sup_norm(), euclid(x0)) + 1.0;
  rec.delta_bound = 2.0 * delta_functional(pilot, alpha, cs.constants.delta) + 1.0;
  rec.lambda_used = options.lambda ? *options.lambda
                                   : select_lambda(cs, params, rec.lambda_alpha_g, rec.N_bound, rec.delta_bound);
  require(rec.lambda_used >= 1.0, "lambda must be >= 1");
  rec.contraction_factor = contraction_factor(operator_constants(cs, alpha, params.T, rec.N_bound),
                                              cs.m * rec.lambda_alpha_g, rec.delta_bound, rec.lambda_used);

  GridFunction x(grid, d);
  for (int i = 0; i < x.size(); ++i)
    for (int k = 0; k < d; ++k) x.at(i, k) = x0[k] + options.initial_offset;

  for (int it = 0; it < options.max_iter; ++it) {
    GridFunction next = drift_term(cs, x).values;
    next += diffusion_term(cs, x, g).values;
    for (int i = 0; i < next.size(); ++i)
      for (int k = 0; k < d; ++k) next.at(i, k) += x0[k];
    if (!all_finite(next.values()))
      throw DivergenceError("Picard iterate " + std::to_string(it + 1) + " is not finite");
    const GridFunction diff = next - x;
    const auto weighted = w_alpha_lambda_norm(diff, alpha, rec.lambda_used);
    const double plain = w_alpha_infty_norm(diff, alpha).value;
    rec.distances.push_back(weighted.value);
    rec.log_distances.push_back(weighted.log_value);
    rec.plain_distances.push_back(plain);
    x = std::move(next);
    rec.iterations = it + 1;
    if (plain < options.tol) {
      rec.converged = true;
      break;
    }
  }
  rec.x = std::move(x);
  rec.holder_estimate = grid.intervals() >= 64 ? holder_exponent_estimate(rec.x).exponent
                                                : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

double phi_exponent(double alpha, double gamma) {
  require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  const double threshold = (1.0 - 2.0 * alpha) / (1.0 - alpha);
  if (gamma < threshold) return 1.0 / (1.0 - alpha);
  if (gamma < 1.0) return 1.01 / (1.0 - 2.0 * alpha);
  return 1.0 / (1.0 - 2.0 * alpha);
}

GrowthCalibration calibrate_growth(std::span<const double> norms, std::span<const double> lambdas, double phi) {
  require(norms.size() == lambdas.size() && !norms.empty(), "calibration needs matching, non-empty samples");
  const size_t n = norms.size();
  std::vector<double> y(n), z(n);
  for (size_t i = 0; i < n; ++i) {
    require(norms[i] > 0.0, "calibration norms must be positive");
    y[i] = std::log(norms[i]);
    z[i] = std::pow(lambdas[i], phi);
  }
  double my = 0.0, mz = 0.0;
  for (size_t i = 0; i < n; ++i) my += y[i], mz += z[i];
  my /= n;
  mz /= n;
  double szz = 0.0, szy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    szz += (z[i] - mz) * (z[i] - mz);
    szy += (z[i] - mz) * (y[i] - my);
  }
  GrowthCalibration cal;
  cal.phi = phi;
  cal.paths = static_cast<int>(n);
  cal.C6 = szz > 0.0 ? std::max(0.0, szy / szz) : 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) worst = std::max(worst, y[i] - cal.C6 * z[i]);
  cal.C5 = std::exp(worst + std::log(2.0));
  return cal;
}

GrowthBoundReport growth_bound_check(const SolutionRecord& sol, const CoefficientSet& cs, const HolderParams& params,
                                     const GrowthCalibration& calibration) {
  require(cs.constants.K0 > 0.0, "growth bound needs a positive growth constant K0");
  require(cs.constants.gamma >= 0.0 && cs.constants.gamma <= 1.0, "growth exponent must lie in [0, 1]");
  GrowthBoundReport r;
  r.norm_alpha_infty = w_alpha_infty_norm(sol.x, params.alpha).value;
  r.lambda_alpha_g = sol.lambda_alpha_g;
  r.phi = calibration.phi;
  r.C5 = calibration.C5;
  r.C6 = calibration.C6;
  r.bound = r.C5 * std::exp(r.C6 * std::pow(r.lambda_alpha_g, r.phi));
  r.satisfied = r.norm_alpha_infty <= r.bound;
  return r;
}

void write_solution_csv(std::ostream& os, const GridFunction& x) {
  os << "t";
  for (int k = 0; k < x.dim(); ++k) os << ",x" << (k + 1);
  os << "\n";
  char buf[64];
  for (int i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", x.grid().node(i));
    os << buf;
    for (int k = 0; k < x.dim(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", x.at(i, k));
      os << buf;
    }
    os << "\n";
  }
}

nlohmann::ordered_json solution_metadata(const SolutionRecord& sol) {
  nlohmann::ordered_json j;
  j["lambda"] = sol.lambda_used;
  j["iterations"] = sol.iterations;
  nlohmann::ordered_json dist = nlohmann::ordered_json::array(), logd = nlohmann::ordered_json::array(),
                         plain = nlohmann::ordered_json::array();
  for (double v : sol.distances) dist.push_back(json_number(v));
  for (double v : sol.log_distances) logd.push_back(json_number(v));
  for (double v : sol.plain_distances) plain.push_back(json_number(v));
  j["distances"] = dist;
  j["log_distances"] = logd;
  j["unweighted_distances"] = plain;
  j["lambda_alpha_g"] = sol.lambda_alpha_g;
  j["holder_estimate"] = json_number(sol.holder_estimate);
  j["converged"] = sol.converged;
  j["contraction_factor"] = json_number(sol.contraction_factor);
  j["N_bound"] = sol.N_bound;
  j["delta_bound"] = sol.delta_bound;
  nlohmann::ordered_json x0 = nlohmann::ordered_json::array();
  for (double v : sol.x0) x0.push_back(v);
  j["x0"] = x0;
  return j;
}

}  // namespace vfbm
