#pragma once

#include "leanreg/matrix.hpp"

namespace leanreg {

/// All eigenvalues of a symmetric matrix, ascending, via Householder
/// tridiagonalization and the implicit-shift QL iteration. Destroys no input
/// (works on a copy). Eigenvectors are not formed.
Vector sym_eigenvalues(Matrix a);

/// Eigenvalues of a symmetric tridiagonal matrix given its diagonal and
/// subdiagonal (offdiag[i] couples i and i+1), ascending.
Vector tridiag_eigenvalues(Vector diag, Vector offdiag);

/// (lambda_min, lambda_max) of a symmetric matrix. Dense path up to
/// kLanczosThreshold, Lanczos with full reorthogonalization above it.
std::pair<double, double> sym_extreme_eigenvalues(const Matrix& a);

inline constexpr std::size_t kLanczosThreshold = 512;

/// Extreme eigenvalues by Lanczos with full reorthogonalization and a fixed
/// iteration budget of 2 ceil(sqrt(d)) + 20.
std::pair<double, double> lanczos_extreme_eigenvalues(const Matrix& a);

}  // namespace leanreg
