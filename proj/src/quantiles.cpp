#include "leanreg/quantiles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "leanreg/errors.hpp"

namespace leanreg {

namespace {

void check_prob(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must lie in (0, 1)");
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Continued-fraction kernel for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr int kMaxIter = 300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    check_prob(p);
    // Acklam's rational approximation (relative error below 1.2e-9).
    static constexpr double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }
    // One Halley refinement against the erf-based CDF.
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double incomplete_beta_inv(double a, double b, double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);
    const double log_norm = -log_beta(a, b);
    for (int it = 0; it < 200; ++it) {
        const double f = incomplete_beta(a, b, x) - y;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        const double pdf =
            std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
        double next = x - f / pdf;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // Newton left the bracket
        if (std::abs(next - x) <= 1e-16 * std::abs(next)) return next;
        x = next;
    }
    return x;
}

double student_t_cdf(double t, int df) {
    const double nu = double(df);
    const double z = nu / (nu + t * t);
    const double half_tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, z);
    return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_quantile(double p, int df) {
    check_prob(p);
    if (df < 1) throw DomainError("degrees of freedom must be >= 1");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_t_quantile(1.0 - p, df);

    const double nu = double(df);
    const double z = incomplete_beta_inv(0.5 * nu, 0.5, 2.0 * (1.0 - p));
    double t = z > 0.0 ? std::sqrt(nu * (1.0 - z) / z)
                       : std::numeric_limits<double>::infinity();
    // Newton polish on the t scale.
    const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                            0.5 * std::log(nu * std::numbers::pi);
    for (int it = 0; it < 3 && std::isfinite(t); ++it) {
        const double pdf =
            std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
        t -= (student_t_cdf(t, df) - p) / pdf;
    }
    return t;
}

}  // namespace leanreg
