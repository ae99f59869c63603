#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vfbm/coeffs.hpp"
#include "vfbm/report.hpp"

namespace vfbm {

struct VerifyOptions {
  int n = 64;              // grid intervals per case
  double dN_scale = 1.0;   // multiplies d_N in the drift contraction check (negative control)
  double slack_c = 0.2;    // slack = max(5%, slack_c / sqrt(n))
};

/// max(0.05, c / sqrt(n)).
double quadrature_slack(int n, double c);

/// Drift operator bounds: the Volterra-Lebesgue bound on random bivariate
/// kernels (items cotaf1), then the Holder bound, the weighted bound and the
/// weighted contraction of the drift term for catalog drifts (norma1,
/// norma2, contraction) at lambda in {1, 2, 4, 8, 16}.
EstimateReport check_lebesgue_estimates(long cases, std::uint64_t seed, const VerifyOptions& options = {});

/// Young-integral bounds against linear and fBm drivers (H in {0.6, 0.75,
/// 0.9}) with the upper Lambda bracket: pointwise (eq1), increments
/// (cotasi1), weighted integral (cotasi2), and the diffusion-term Holder,
/// weighted and contraction bounds (cotasi3..5). cotasi3.K1 is the advisory
/// variant using the K1 display.
EstimateReport check_rs_estimates(long cases, std::uint64_t seed, const VerifyOptions& options = {});

/// Four- and eight-point increment inequalities of a scalar diffusion
/// coefficient (items le1, le2, le3) with |x_k| <= N and s_1, s_2 <= t.
/// Exact algebra: zero slack plus a rounding guard.
EstimateReport check_sigma_lemmas(const CoefficientSet& cs, long cases, double N, std::uint64_t seed);

/// Standalone integral bounds over a parameter grid: sup t^mu e^{-lambda t},
/// the Gamma bound of the exponential kernel, the C_alpha kernel bound, and
/// the two Beta identities.
EstimateReport check_aux_inequalities(std::span<const double> alpha_grid, std::span<const double> lambda_grid,
                                      std::span<const double> mu_grid);

/// verify_hypotheses plus partials_fd_check over every catalog entry at
/// N in {1, 10}, merged into one report.
EstimateReport check_hypotheses(long samples, std::uint64_t seed);

struct SuiteConfig {
  // Any of "lebesgue", "rs", "lemmas", "aux", "hypotheses".
  std::vector<std::string> checks = {"lebesgue", "rs", "lemmas", "aux", "hypotheses"};
  long cases = 1000;
  long lemma_cases = 100000;
  long hypothesis_samples = 100000;
  std::uint64_t seed = 20240601;
  VerifyOptions options;
};

std::vector<EstimateReport> run_suite(const SuiteConfig& config);
bool all_passed(const std::vector<EstimateReport>& reports);

}  // namespace vfbm
