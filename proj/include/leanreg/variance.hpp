#pragma once

#include <optional>

#include "leanreg/estimation.hpp"
#include "leanreg/quantiles.hpp"

namespace leanreg {

enum class ResidualSource { OlsResiduals, BcResiduals };

struct ContrastVariance {
    double sigma2_hat = 0.0;
    Vector contrast;
    std::optional<Matrix> meat;  // retained only on request
};

/// Sandwich variance of the contrast c,
///   sigma2_hat = c^T SigmaHat^{-1} VHat SigmaHat^{-1} c,
/// computed as the O(n d) contraction (1/n) sum_i (w . X_i)^2 r_i^2 with
/// w = SigmaHat^{-1} c. The meat VHat is materialized only when keep_meat is
/// set. residual_source selects residuals from the plain fit (default) or
/// from the bias-corrected coefficients; df_correction applies an optional
/// n/(n-d) scaling (off by default).
ContrastVariance sandwich(const Sample& sample, const FitResult& fit, const Vector& c,
                          ResidualSource residual_source = ResidualSource::OlsResiduals,
                          bool keep_meat = false, bool df_correction = false);

}  // namespace leanreg
