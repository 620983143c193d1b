#pragma once

#include <vector>

#include "leanreg/errors.hpp"
#include "leanreg/kernels.hpp"
#include "leanreg/matrix.hpp"

namespace leanreg {

/// An n x d design paired with an n-vector response. Construction validates
/// shape (n >= d >= 1) and finiteness of every entry.
struct Sample {
    Matrix x;
    Vector y;

    Sample() = default;
    Sample(Matrix x_, Vector y_);

    std::size_t n() const { return x.rows(); }
    std::size_t d() const { return x.cols(); }
};

/// Sample gram matrix with its Cholesky factor. min_pivot is the smallest
/// diagonal pivot; construction fails (SingularGram) before a non-SPD factor
/// can escape.
struct GramFactor {
    Matrix sigma_hat;
    Matrix chol;
    double min_pivot = 0.0;

    /// sigma_hat^{-1} v
    Vector solve(std::span<const double> v) const { return chol_solve(chol, v); }
};

struct FitResult {
    Vector beta_hat;
    Vector residuals;       // y_i - X_i . beta_hat
    GramFactor gram;
    Vector leverage_norms;  // ||X_i||^2 in the sigma_hat^{-1} metric
};

/// Relative pivot tolerance for singularity detection.
inline constexpr double kPivotTolRel = 1e-12;

GramFactor gram(const Sample& sample);

/// Least squares fit via two triangular solves against the gram Cholesky
/// factor. Throws SingularGram when the design is rank deficient.
FitResult ols_fit(const Sample& sample);

/// All n leave-one-out coefficient vectors from the full-sample factor via
/// the rank-one downdate identity, O(d^2) per observation. Throws
/// DegenerateLeaveOneOut(i) when a downdate denominator vanishes.
std::vector<Vector> loo_fits(const Sample& sample, const FitResult& fit);

}  // namespace leanreg
