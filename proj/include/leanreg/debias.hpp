#pragma once

#include "leanreg/dgp.hpp"
#include "leanreg/estimation.hpp"

namespace leanreg {

enum class DebiasMethod { MomentBias, Jackknife, None };

struct DebiasResult {
    Vector bias_hat;
    Vector beta_bc;  // beta_hat - bias_hat
    DebiasMethod method = DebiasMethod::None;
};

/// Method-of-moments estimate of the second-order least-squares bias,
///   bias_hat = -(1/n^2) sum_i SigmaHat^{-1} X_i r_i ||X_i||^2_{SigmaHat^{-1}},
/// evaluated from the stored Cholesky factor and leverages in O(n d) plus one
/// solve.
DebiasResult moment_bias(const Sample& sample, const FitResult& fit);

/// Classical delete-1 jackknife bias correction,
///   beta_jk = n beta_hat - ((n-1)/n) sum_i beta_{(-i)},
/// with the leave-one-out fits obtained by rank-one downdates.
DebiasResult jackknife_debias(const Sample& sample, const FitResult& fit);

/// Population-parameter bias term evaluated on a realized sample,
///   -(1/n^2) sum_i Sigma^{-1} X_i (Y_i - X_i . beta) ||X_i||^2_{Sigma^{-1}},
/// for processes that expose Sigma = I and beta. Diagnostics/tests only.
Vector true_bias_oracle(const DgpSpec& dgp, const Sample& sample, const Vector& beta_star);

}  // namespace leanreg
