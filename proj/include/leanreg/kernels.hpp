#pragma once

#include <cstddef>
#include <span>

#include "leanreg/matrix.hpp"

namespace leanreg {

/// Row-chunk width used for deterministic parallel reductions. Partial sums
/// are accumulated per fixed-size chunk and combined in chunk order, so the
/// result is identical for every thread count.
inline constexpr std::size_t kReduceChunk = 2048;

int max_threads();
void set_threads(int n);

/// Sample gram matrix (1/n) * X^T X. Parallel over output rows; the
/// accumulation order over observations is fixed, so the result is
/// bit-identical to the serial reference.
Matrix gram_matrix(const Matrix& x);

/// sum_i w_i * X_i as a d-vector (deterministic chunked reduction).
Vector weighted_rowsum(const Matrix& x, std::span<const double> w);

/// sum_i (X_i . w)^2 * r_i^2 (deterministic chunked reduction).
double weighted_sq_contraction(const Matrix& x, std::span<const double> w,
                               std::span<const double> r);

/// Per-row inner products X_i . v.
Vector row_dots(const Matrix& x, std::span<const double> v);

/// (1/n) * sum_i X_i X_i^T r_i^2, the sandwich "meat".
Matrix meat_matrix(const Matrix& x, std::span<const double> r);

/// Per-row squared half-solve norms ||L^{-1} X_i||_2^2 against a lower
/// Cholesky factor L.
Vector leverage_norms(const Matrix& x, const Matrix& chol_lower);

struct CholeskyResult {
    Matrix lower;      // L with L L^T = A; valid only if min_pivot > 0
    double min_pivot;  // smallest diagonal pivot encountered (<= 0 on failure)
};

/// Cholesky factorization of a symmetric positive definite matrix. Stops at
/// the first pivot at or below pivot_floor and reports it via min_pivot.
CholeskyResult spd_cholesky(const Matrix& a, double pivot_floor = 0.0);

/// Solve L z = b in place.
void forward_solve(const Matrix& lower, std::span<double> b);
/// Solve L^T z = b in place.
void backward_solve(const Matrix& lower, std::span<double> b);
/// A^{-1} b via the two triangular solves against A = L L^T.
Vector chol_solve(const Matrix& lower, std::span<const double> b);

/// Plain single-threaded loops, kept as the reference the parallel kernels
/// are tested and benchmarked against.
namespace serial {

Matrix gram_matrix(const Matrix& x);
Vector weighted_rowsum(const Matrix& x, std::span<const double> w);
double weighted_sq_contraction(const Matrix& x, std::span<const double> w,
                               std::span<const double> r);
Matrix meat_matrix(const Matrix& x, std::span<const double> r);
Vector leverage_norms(const Matrix& x, const Matrix& chol_lower);

}  // namespace serial

}  // namespace leanreg
