#include "leanreg/diagnostics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "leanreg/debias.hpp"

namespace leanreg {

double median(Vector values) {
    if (values.empty()) throw EmptyInput();
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

namespace {

void check_symmetric(const Matrix& a) {
    if (a.rows() != a.cols()) throw NotSymmetric();
    double scale = 1e-300;
    for (std::size_t i = 0; i < a.rows(); ++i) scale = std::max(scale, std::abs(a(i, i)));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale) throw NotSymmetric();
}

}  // namespace

void jacobi_eigendecomposition(Matrix a, Vector& values, Matrix& vectors) {
    check_symmetric(a);
    const std::size_t n = a.rows();
    vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) vectors(i, i) = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) < 1e-15 * (1.0 + std::sqrt(off) + std::abs(a(0, 0)))) break;
        double diag_norm = 0.0;
        for (std::size_t p = 0; p < n; ++p) diag_norm += a(p, p) * a(p, p);
        if (off <= 1e-30 * (diag_norm + 1e-300)) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vectors(k, p), vkq = vectors(k, q);
                    vectors(k, p) = c * vkp - s * vkq;
                    vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    // sort ascending, permuting the eigenvector columns along
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    values.resize(n);
    Matrix sorted(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) sorted(i, j) = vectors(i, order[j]);
    }
    vectors = std::move(sorted);
}

Matrix spd_sqrt_inv(const Matrix& a) {
    Vector values;
    Matrix u;
    jacobi_eigendecomposition(a, values, u);
    const std::size_t n = a.rows();
    for (double v : values)
        if (v <= 0.0) throw Error("matrix is not positive definite");
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += u(i, k) * u(j, k) / std::sqrt(values[k]);
            out(i, j) = s;
            out(j, i) = s;
        }
    return out;
}

std::pair<double, double> operator_norm_dev(const Matrix& sigma_hat) {
    check_symmetric(sigma_hat);
    const auto [lo, hi] = sym_extreme_eigenvalues(sigma_hat);
    return {std::max(std::abs(hi - 1.0), std::abs(lo - 1.0)), lo};
}

std::pair<double, double> operator_norm_dev(const Matrix& sigma_hat,
                                            const Matrix& sigma_pop_sqrt_inv) {
    check_symmetric(sigma_hat);
    check_symmetric(sigma_pop_sqrt_inv);
    const std::size_t n = sigma_hat.rows();
    if (sigma_pop_sqrt_inv.rows() != n) throw Error("whitening matrix dimension mismatch");
    // M = S * sigma_hat * S
    Matrix tmp(n, n), m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tmp(i, j) = dot(sigma_pop_sqrt_inv.row(i), sigma_hat.row(j));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = dot(tmp.row(i), sigma_pop_sqrt_inv.row(j));
    // symmetrize away rounding before the eigensolve
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    const auto [lo, hi] = sym_extreme_eigenvalues(m);
    return {std::max(std::abs(hi - 1.0), std::abs(lo - 1.0)), lo};
}

namespace {

FitResult fit_with_gram(const Sample& sample, Matrix sigma) {
    double max_diag = 0.0;
    for (std::size_t j = 0; j < sigma.rows(); ++j) max_diag = std::max(max_diag, sigma(j, j));
    auto chol = spd_cholesky(sigma, kPivotTolRel * max_diag);
    if (chol.lower.rows() == 0) throw SingularGram(chol.min_pivot);
    GramFactor g{std::move(sigma), std::move(chol.lower), chol.min_pivot};

    const std::size_t n = sample.n();
    Vector gamma = weighted_rowsum(sample.x, sample.y);
    for (double& v : gamma) v /= double(n);
    Vector beta = g.solve(gamma);
    Vector fitted = row_dots(sample.x, beta);
    Vector residuals(n);
    for (std::size_t i = 0; i < n; ++i) residuals[i] = sample.y[i] - fitted[i];
    Vector lev = leverage_norms(sample.x, g.chol);
    return {std::move(beta), std::move(residuals), std::move(g), std::move(lev)};
}

}  // namespace

ConcentrationSnapshot concentration_snapshot(const Sample& sample, const Vector& beta_star) {
    const std::size_t n = sample.n(), d = sample.d();
    if (beta_star.size() != d) throw Error("beta_star dimension mismatch");
    Matrix sigma = gram_matrix(sample.x);
    const auto [dev, lo] = operator_norm_dev(sigma);  // population gram is I_d
    const FitResult fit = fit_with_gram(sample, std::move(sigma));

    Vector delta(d);
    for (std::size_t k = 0; k < d; ++k) delta[k] = fit.beta_hat[k] - beta_star[k];
    const Vector dev_fit = row_dots(sample.x, delta);
    return {dev, lo, norm2(delta), norm_inf(dev_fit), n, d};
}

std::vector<SweepSummary> concentration_sweep(
    const std::vector<std::pair<std::size_t, std::size_t>>& grid, DgpKind kind,
    std::size_t reps, RngStream rng) {
    std::vector<SweepSummary> out;
    out.reserve(grid.size());
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
        const auto [n, d] = grid[cell];
        if (n <= d) throw ConfigError("concentration sweep requires n > d");
        DgpSpec spec{kind, n, d, 0.0, ThetaKind::FirstCoordinate, rng.seed()};
        const GroundTruth gt = ground_truth(spec);
        RngStream cell_rng = rng.substream(cell);

        Vector ds(reps), lmin(reps), berr(reps), mdev(reps);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t r = 0; r < std::int64_t(reps); ++r) {
            const Sample sample = generate(spec, cell_rng.substream(uint64_t(r)));
            const ConcentrationSnapshot snap = concentration_snapshot(sample, gt.beta_star);
            ds[r] = snap.d_sigma;
            lmin[r] = snap.lambda_min;
            berr[r] = snap.beta_err_sigma;
            mdev[r] = snap.max_fitted_dev;
        }

        SweepSummary s;
        s.n = n;
        s.d = d;
        s.reps = reps;
        s.median_d_sigma = median(ds);
        s.median_lambda_min = median(lmin);
        s.median_beta_err_sigma = median(berr);
        s.median_max_fitted_dev = median(mdev);
        s.rate_ratio = s.median_d_sigma / std::sqrt(double(d) / double(n));
        out.push_back(s);
    }
    return out;
}

std::vector<BiasScalingRow> bias_scaling_probe(std::size_t n, const std::vector<std::size_t>& d_list,
                                               std::size_t reps, RngStream rng) {
    std::vector<BiasScalingRow> out;
    out.reserve(d_list.size());
    for (std::size_t cell = 0; cell < d_list.size(); ++cell) {
        const std::size_t d = d_list[cell];
        DgpSpec spec{DgpKind::MisspecifiedCubic, n, d, 0.0, ThetaKind::FirstCoordinate, rng.seed()};
        const GroundTruth gt = ground_truth(spec);
        const Vector c = canonical_contrast(spec);
        RngStream cell_rng = rng.substream(hash_combine(0x626961, cell));
        const double root_n = std::sqrt(double(n));

        Vector raw(reps), bc(reps);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t r = 0; r < std::int64_t(reps); ++r) {
            const Sample sample = generate(spec, cell_rng.substream(uint64_t(r)));
            const FitResult fit = ols_fit(sample);
            const DebiasResult db = moment_bias(sample, fit);
            raw[r] = root_n * (dot(c, fit.beta_hat) - gt.target);
            bc[r] = root_n * (dot(c, db.beta_bc) - gt.target);
        }

        BiasScalingRow row;
        row.n = n;
        row.d = d;
        row.reps = reps;
        auto mean_se = [&](const Vector& v) {
            double m = 0.0;
            for (double x : v) m += x;
            m /= double(v.size());
            double ss = 0.0;
            for (double x : v) ss += (x - m) * (x - m);
            const double sd = std::sqrt(ss / double(v.size() - 1));
            return std::pair{m, sd / std::sqrt(double(v.size()))};
        };
        std::tie(row.raw_mean, row.raw_se) = mean_se(raw);
        std::tie(row.bc_mean, row.bc_se) = mean_se(bc);
        out.push_back(row);
    }
    return out;
}

}  // namespace leanreg
