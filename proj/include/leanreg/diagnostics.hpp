#pragma once

#include <utility>
#include <vector>

#include "leanreg/dgp.hpp"
#include "leanreg/eigensolve.hpp"
#include "leanreg/estimation.hpp"

namespace leanreg {

/// Per-replication record of the quantities driving the theory: gram-matrix
/// operator-norm deviation, its smallest eigenvalue, the Sigma-norm estimator
/// error, and the largest fitted-value deviation.
struct ConcentrationSnapshot {
    double d_sigma = 0.0;
    double lambda_min = 0.0;
    double beta_err_sigma = 0.0;
    double max_fitted_dev = 0.0;
    std::size_t n = 0;
    std::size_t d = 0;
};

/// Jacobi eigendecomposition (values ascending, columns of v are the
/// eigenvectors). Cyclic sweeps; intended for the small matrices handled by
/// the population-whitening path.
void jacobi_eigendecomposition(Matrix a, Vector& values, Matrix& vectors);

/// A^{-1/2} of a symmetric positive definite matrix via eigendecomposition.
Matrix spd_sqrt_inv(const Matrix& a);

/// (D_sigma, lambda_min) of S * sigma_hat * S where S defaults to the
/// identity: D_sigma = max(|lambda_max - 1|, |lambda_min - 1|). Extreme
/// eigenvalues come from the dense tridiagonal path, or Lanczos past
/// kLanczosThreshold. Throws NotSymmetric on asymmetric input.
std::pair<double, double> operator_norm_dev(const Matrix& sigma_hat);
std::pair<double, double> operator_norm_dev(const Matrix& sigma_hat,
                                            const Matrix& sigma_pop_sqrt_inv);

/// One replication's snapshot against the population parameters (identity
/// population gram).
ConcentrationSnapshot concentration_snapshot(const Sample& sample, const Vector& beta_star);

struct SweepSummary {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t reps = 0;
    double median_d_sigma = 0.0;
    double median_lambda_min = 0.0;
    double median_beta_err_sigma = 0.0;
    double median_max_fitted_dev = 0.0;
    double rate_ratio = 0.0;  // median_d_sigma / sqrt(d / n)
};

/// Median concentration behaviour over reps replications per (n, d) cell.
std::vector<SweepSummary> concentration_sweep(const std::vector<std::pair<std::size_t, std::size_t>>& grid,
                                              DgpKind kind, std::size_t reps, RngStream rng);

struct BiasScalingRow {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t reps = 0;
    double raw_mean = 0.0;  // MC mean of sqrt(n) c^T (beta_hat - beta)
    double raw_se = 0.0;
    double bc_mean = 0.0;   // MC mean of sqrt(n) c^T (beta_bc - beta)
    double bc_se = 0.0;
};

/// Monte Carlo profile of the sqrt(n)-scaled contrast error before and after
/// bias correction under the cubic model with theta = e_1, rho = 0.
std::vector<BiasScalingRow> bias_scaling_probe(std::size_t n, const std::vector<std::size_t>& d_list,
                                               std::size_t reps, RngStream rng);

double median(Vector values);

}  // namespace leanreg
