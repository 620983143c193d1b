#include <doctest.h>

#include <cmath>

#include "leanreg/debias.hpp"
#include "leanreg/diagnostics.hpp"
#include "leanreg/rng.hpp"

using namespace leanreg;

namespace {

Matrix random_symmetric(std::size_t d, uint64_t seed) {
    RngStream rng(seed, 0);
    Matrix a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const double v = rng.normal();
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

Matrix wishart_like(std::size_t n, std::size_t d, uint64_t seed) {
    RngStream rng(seed, 1);
    Matrix x(n, d);
    for (double& v : x.data()) v = rng.normal();
    return gram_matrix(x);
}

}  // namespace

TEST_CASE("tridiagonal eigenvalues on an analytic case") {
    // tridiag(diag=2, off=-1) of size m has eigenvalues 2 - 2 cos(k pi/(m+1))
    const std::size_t m = 12;
    Vector diag(m, 2.0), off(m - 1, -1.0);
    const Vector ev = tridiag_eigenvalues(diag, off);
    for (std::size_t k = 1; k <= m; ++k) {
        const double expect = 2.0 - 2.0 * std::cos(double(k) * M_PI / double(m + 1));
        CHECK(ev[k - 1] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("dense eigenvalues agree with the jacobi route on random symmetric matrices") {
    for (std::size_t d : {2, 5, 16, 33, 64}) {
        const Matrix a = random_symmetric(d, 100 + d);
        const Vector ql = sym_eigenvalues(a);
        Vector jac;
        Matrix vecs;
        jacobi_eigendecomposition(a, jac, vecs);
        REQUIRE(ql.size() == d);
        double scale = 0.0;
        for (double v : jac) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < d; ++k) CHECK(std::abs(ql[k] - jac[k]) < 1e-8 * scale);
    }
}

TEST_CASE("jacobi reproduces A v = lambda v") {
    const Matrix a = random_symmetric(10, 55);
    Vector values;
    Matrix vecs;
    jacobi_eigendecomposition(a, values, vecs);
    for (std::size_t k = 0; k < 10; ++k) {
        Vector v(10);
        for (std::size_t i = 0; i < 10; ++i) v[i] = vecs(i, k);
        const Vector av = matvec(a, v);
        for (std::size_t i = 0; i < 10; ++i)
            CHECK(av[i] == doctest::Approx(values[k] * v[i]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("lanczos matches the dense path on a large gram matrix") {
    const Matrix a = wishart_like(3000, 600, 7);
    REQUIRE(a.rows() > kLanczosThreshold);
    const auto [lo_l, hi_l] = lanczos_extreme_eigenvalues(a);
    const Vector dense = sym_eigenvalues(a);
    CHECK(lo_l == doctest::Approx(dense.front()).epsilon(1e-8));
    CHECK(hi_l == doctest::Approx(dense.back()).epsilon(1e-8));
}

TEST_CASE("operator_norm_dev examples") {
    {
        Matrix half(2, 2);
        half(0, 0) = 0.5;
        half(1, 1) = 0.5;
        const auto [dev, lmin] = operator_norm_dev(half);
        CHECK(dev == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(lmin == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        Matrix diag(2, 2);
        diag(0, 0) = 2.0;
        diag(1, 1) = 0.9;
        const auto [dev, lmin] = operator_norm_dev(diag);
        CHECK(dev == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lmin == doctest::Approx(0.9).epsilon(1e-12));
    }
    {
        Matrix eye(3, 3);
        for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
        const auto [dev, lmin] = operator_norm_dev(eye);
        CHECK(dev == doctest::Approx(0.0));
        CHECK(lmin == doctest::Approx(1.0));
    }
}

TEST_CASE("operator_norm_dev with an explicit whitening matrix") {
    // sigma = 4 I, sigma_hat = 4 I: whitened matrix is the identity
    Matrix sh(3, 3), s_inv_sqrt(3, 3);
    for (int i = 0; i < 3; ++i) {
        sh(i, i) = 4.0;
        s_inv_sqrt(i, i) = 0.5;
    }
    const auto [dev, lmin] = operator_norm_dev(sh, s_inv_sqrt);
    CHECK(dev == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lmin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spd_sqrt_inv squares back to the inverse") {
    const Matrix a = wishart_like(100, 6, 9);
    const Matrix s = spd_sqrt_inv(a);
    // s a s == I
    const std::size_t d = 6;
    Matrix tmp(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) tmp(i, j) = dot(s.row(i), a.row(j));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double v = dot(tmp.row(i), s.row(j));
            CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("asymmetric input is rejected") {
    Matrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 2.0;
    CHECK_THROWS_AS(operator_norm_dev(a), NotSymmetric);
    CHECK_THROWS_AS(jacobi_eigendecomposition(a, *(new Vector), *(new Matrix)), NotSymmetric);
}

TEST_CASE("snapshot quantities are invariant under design rotation") {
    RngStream rng(77, 0);
    const std::size_t n = 150, d = 4;
    Matrix x(n, d);
    for (double& v : x.data()) v = rng.normal();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 2.0 * x(i, 0) + rng.normal();

    // orthogonal Q from jacobi eigenvectors of a random symmetric matrix
    Matrix q;
    Vector unused;
    jacobi_eigendecomposition(random_symmetric(d, 5), unused, q);

    Matrix xq(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k < d; ++k) v += x(i, k) * q(k, j);
            xq(i, j) = v;
        }

    const auto [dev_a, lmin_a] = operator_norm_dev(gram_matrix(x));
    const auto [dev_b, lmin_b] = operator_norm_dev(gram_matrix(xq));
    CHECK(dev_a == doctest::Approx(dev_b).epsilon(1e-8));
    CHECK(lmin_a == doctest::Approx(lmin_b).epsilon(1e-8));

    // beta errors and fitted deviations match when beta* rotates along
    const Sample sa(x, y);
    const Sample sb(xq, y);
    const FitResult fa = ols_fit(sa);
    const FitResult fb = ols_fit(sb);
    Vector beta_star = {2.0, 0.0, 0.0, 0.0};
    Vector beta_star_rot(d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) beta_star_rot[j] += q(k, j) * beta_star[k];

    Vector da(d), db2(d);
    for (std::size_t k = 0; k < d; ++k) {
        da[k] = fa.beta_hat[k] - beta_star[k];
        db2[k] = fb.beta_hat[k] - beta_star_rot[k];
    }
    CHECK(norm2(da) == doctest::Approx(norm2(db2)).epsilon(1e-8));
    CHECK(norm_inf(row_dots(x, da)) == doctest::Approx(norm_inf(row_dots(xq, db2))).epsilon(1e-8));
}

TEST_CASE("concentration snapshot fields and the d_sigma identity") {
    const DgpSpec spec{DgpKind::WellSpecified, 300, 6, 0.0, ThetaKind::FirstCoordinate, 0};
    const GroundTruth gt = ground_truth(spec);
    const Sample s = generate(spec, RngStream(42, 0));
    const ConcentrationSnapshot snap = concentration_snapshot(s, gt.beta_star);
    CHECK(snap.n == 300);
    CHECK(snap.d == 6);
    CHECK(snap.d_sigma > 0.0);
    CHECK(snap.lambda_min > 0.0);
    CHECK(snap.beta_err_sigma > 0.0);
    CHECK(snap.max_fitted_dev > 0.0);
    // d_sigma equals the extreme-eigenvalue deviation of the gram matrix
    Vector values;
    Matrix vecs;
    jacobi_eigendecomposition(gram_matrix(s.x), values, vecs);
    const double expect = std::max(std::abs(values.front() - 1.0), std::abs(values.back() - 1.0));
    CHECK(snap.d_sigma == doctest::Approx(expect).epsilon(1e-10));
    CHECK(snap.d_sigma >= std::abs(values.front() - 1.0) - 1e-10);
    CHECK(snap.d_sigma >= std::abs(values.back() - 1.0) - 1e-10);
}

TEST_CASE("concentration sweep: medians finite, rate ratio near constant at fixed d/n") {
    const std::vector<std::pair<std::size_t, std::size_t>> grid = {{400, 8}, {1600, 32}};
    const auto rows = concentration_sweep(grid, DgpKind::WellSpecified, 120, RngStream(3, 3));
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.median_d_sigma > 0.0);
        CHECK(r.median_lambda_min > 0.0);
        CHECK(r.median_lambda_min < 1.0 + r.median_d_sigma + 1e-12);
        CHECK(r.median_beta_err_sigma > 0.0);
        CHECK(r.median_max_fitted_dev >= r.median_beta_err_sigma * 0.0);
    }
    // same d/n: the sqrt(d/n)-normalized medians should be comparable
    const double ratio = rows[0].rate_ratio / rows[1].rate_ratio;
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.67);
}

TEST_CASE("mean d_sigma decreases in n at fixed d") {
    const std::vector<std::pair<std::size_t, std::size_t>> grid = {
        {300, 10}, {900, 10}, {2700, 10}};
    const auto rows = concentration_sweep(grid, DgpKind::WellSpecified, 200, RngStream(8, 1));
    CHECK(rows[0].median_d_sigma > rows[1].median_d_sigma);
    CHECK(rows[1].median_d_sigma > rows[2].median_d_sigma);
}

TEST_CASE("bias scaling probe: correction removes a negative bias component") {
    // At theta = e1 the raw sqrt(n)-bias of this contrast is negative
    // (population value -144/sqrt(n) for rho = 0, any d) and the correction
    // shifts the mean toward zero. Replications are sized so the paired
    // comparison has small Monte Carlo error relative to the shift.
    const auto rows = bias_scaling_probe(400, {20, 60}, 3000, RngStream(12, 0));
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.raw_se > 0.0);
        CHECK(r.bc_se > 0.0);
        const double shift = r.raw_mean - r.bc_mean;  // mean of sqrt(n) c^T biasHat
        CHECK(shift < -1.0);
        CHECK(shift > -10.0);
        CHECK(std::abs(r.bc_mean) < std::abs(r.raw_mean));
        // raw mean should be negative and of the right scale (-144/20 = -7.2)
        CHECK(r.raw_mean < -2.0);
        CHECK(r.raw_mean > -13.0);
    }
}

TEST_CASE("well-specified bias probe analogue: both means near zero") {
    // the linear model is correctly specified, so sqrt(n) c^T (beta_hat-beta)
    // has mean zero with and without correction
    const DgpSpec spec{DgpKind::WellSpecified, 400, 20, 0.0, ThetaKind::FirstCoordinate, 0};
    const GroundTruth gt = ground_truth(spec);
    RngStream root(21, 0);
    const std::size_t reps = 400;
    double raw_sum = 0, bc_sum = 0, raw_ss = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const Sample s = generate(spec, root.substream(r));
        const FitResult fit = ols_fit(s);
        const auto db = moment_bias(s, fit);
        const double raw = std::sqrt(400.0) * (fit.beta_hat[0] - 2.0);
        const double bc = std::sqrt(400.0) * (db.beta_bc[0] - 2.0);
        raw_sum += raw;
        bc_sum += bc;
        raw_ss += raw * raw;
    }
    const double mean_raw = raw_sum / reps;
    const double mean_bc = bc_sum / reps;
    const double se = std::sqrt((raw_ss / reps - mean_raw * mean_raw) / reps);
    CHECK(std::abs(mean_raw) < 4.0 * se);
    CHECK(std::abs(mean_bc) < 4.0 * se);
    (void)gt;
}
