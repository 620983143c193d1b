#include "leanreg/estimation.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdint>

namespace leanreg {

Sample::Sample(Matrix x_, Vector y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.rows() == 0 || x.cols() == 0) throw Error("sample must have n >= 1 and d >= 1");
    if (x.rows() < x.cols())
        throw Error("sample needs n >= d for least squares (got n=" +
                    std::to_string(x.rows()) + ", d=" + std::to_string(x.cols()) + ")");
    if (y.size() != x.rows()) throw Error("response length does not match design rows");
    if (!all_finite(x.data()) || !all_finite(y)) throw Error("sample contains non-finite entries");
}

GramFactor gram(const Sample& sample) {
    Matrix sigma = gram_matrix(sample.x);
    double max_diag = 0.0;
    for (std::size_t j = 0; j < sigma.rows(); ++j) max_diag = std::max(max_diag, sigma(j, j));
    auto chol = spd_cholesky(sigma, kPivotTolRel * max_diag);
    if (chol.lower.rows() == 0) throw SingularGram(chol.min_pivot);
    return {std::move(sigma), std::move(chol.lower), chol.min_pivot};
}

FitResult ols_fit(const Sample& sample) {
    const std::size_t n = sample.n();
    GramFactor g = gram(sample);

    Vector gamma = weighted_rowsum(sample.x, sample.y);
    for (double& v : gamma) v /= double(n);
    Vector beta = g.solve(gamma);

    Vector fitted = row_dots(sample.x, beta);
    Vector residuals(n);
    for (std::size_t i = 0; i < n; ++i) residuals[i] = sample.y[i] - fitted[i];

    Vector lev = leverage_norms(sample.x, g.chol);
    return {std::move(beta), std::move(residuals), std::move(g), std::move(lev)};
}

std::vector<Vector> loo_fits(const Sample& sample, const FitResult& fit) {
    const std::size_t n = sample.n(), d = sample.d();
    const double inv_n = 1.0 / double(n);
    std::vector<Vector> out(n);

    // Pre-scan the downdate denominators so the error is raised
    // deterministically at the smallest offending row index.
    for (std::size_t i = 0; i < n; ++i)
        if (1.0 - fit.leverage_norms[i] * inv_n <= 1e-10) throw DegenerateLeaveOneOut(i);

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(n); ++i) {
        // beta_{(-i)} = beta - (n Sigma)^{-1} X_i r_i / (1 - h_i), with
        // h_i = X_i^T (n Sigma)^{-1} X_i = leverage_norms[i] / n.
        Vector u = fit.gram.solve(sample.x.row(i));
        const double scale = fit.residuals[i] / (double(n) - fit.leverage_norms[i]);
        Vector b = fit.beta_hat;
        for (std::size_t k = 0; k < d; ++k) b[k] -= u[k] * scale;
        out[i] = std::move(b);
    }
    return out;
}

}  // namespace leanreg
