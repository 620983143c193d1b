#pragma once

namespace leanreg {

/// Standard normal CDF (erf-based).
double normal_cdf(double x);

/// Lower-tail standard normal quantile, |error| <= 1e-9 absolute. Rational
/// approximation refined by one Halley step against the erf-based CDF.
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Inverse of I_x(a, b) in x for fixed (a, b).
double incomplete_beta_inv(double a, double b, double y);

/// Student-t CDF with df degrees of freedom.
double student_t_cdf(double t, int df);

/// Lower-tail Student-t quantile, |error| <= 1e-8, via the inverse
/// regularized incomplete beta plus Newton refinement.
double student_t_quantile(double p, int df);

}  // namespace leanreg
