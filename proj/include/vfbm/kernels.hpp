#pragma once

// O(n^2) sweeps behind the norms, fractional operators and Volterra sums.
// Every kernel exists twice with the same signature: `serial` is the
// reference loop, `parallel` partitions the outer index across OpenMP
// threads. Results are bitwise identical for any thread count: each outer
// index is computed by one thread and reductions run in index order.

#include <span>
#include <vector>

namespace vfbm::kernels {

struct PairSup {
  double value = 0.0;
  int first = 0;   // earlier node index
  int second = 0;  // later node index
};

struct WeylSweep {
  PairSup weyl;      // sup |D^{1-a}_{t-} g_{t-}(s)| over node pairs s < t
  PairSup seminorm;  // sup of the W^{1-a,inf}_T integrand over node pairs
};

namespace serial {

/// out[i] = \int_0^{t_i} |f(t_i) - f(s)|^power / (t_i - s)^theta ds for
/// row-major values of dimension `dim` (Euclidean |.|).
void increment_profile(std::span<const double> values, int dim, double h, double theta, double power,
                       std::span<double> out);

/// Pair sweep of the right Weyl derivative of order 1 - alpha and of the
/// W_T^{1-alpha,inf} integrand for a scalar path.
WeylSweep weyl_sweep(std::span<const double> g, double h, double alpha);

/// table[a][b - a - 1] = D^{1-alpha}_{t_b-} g_{t_b-}(s_a), real convention.
std::vector<std::vector<double>> weyl_table(std::span<const double> g, double h, double alpha);

/// sup_{i<j} |f_j - f_i| / (t_j - t_i)^exponent.
PairSup holder_sweep(std::span<const double> values, int dim, double h, double exponent);

/// out[i, r] = sum_{j<i} sum_c K(t_i, t_j)[r, c] * dg[j, c] for a kernel
/// stored row-wise as in BivariateKernelValues (block rows x cols).
void rs_sums(std::span<const double> kernel, int n_nodes, int rows, int cols, std::span<const double> dg,
             std::span<double> out);

/// out[i, r] = trapezoid over j = 0..i of K(t_i, t_j)[r].
void trapezoid_rows(std::span<const double> kernel, int n_nodes, int rows, double h, std::span<double> out);

}  // namespace serial

namespace parallel {

void increment_profile(std::span<const double> values, int dim, double h, double theta, double power,
                       std::span<double> out);
WeylSweep weyl_sweep(std::span<const double> g, double h, double alpha);
std::vector<std::vector<double>> weyl_table(std::span<const double> g, double h, double alpha);
PairSup holder_sweep(std::span<const double> values, int dim, double h, double exponent);
void rs_sums(std::span<const double> kernel, int n_nodes, int rows, int cols, std::span<const double> dg,
             std::span<double> out);
void trapezoid_rows(std::span<const double> kernel, int n_nodes, int rows, double h, std::span<double> out);

}  // namespace parallel

}  // namespace vfbm::kernels
