#include "leanreg/dgp.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace leanreg {

void DgpSpec::validate() const {
    if (n == 0 || d == 0) throw ConfigError("dgp requires n >= 1 and d >= 1");
    if (rho < 0.0 || rho >= 1.0) throw ConfigError("rho must lie in [0, 1)");
}

Vector theta_vector(const DgpSpec& spec) {
    Vector t(spec.d, 0.0);
    if (spec.theta == ThetaKind::FirstCoordinate) {
        t[0] = 1.0;
    } else {
        const double v = 1.0 / std::sqrt(double(spec.d));
        for (double& e : t) e = v;
    }
    return t;
}

Vector canonical_contrast(const DgpSpec& spec) {
    if (spec.kind == DgpKind::WellSpecified) {
        Vector c(spec.d, 0.0);
        c[0] = 1.0;
        return c;
    }
    return theta_vector(spec);
}

namespace {

// One observation from the population of the spec. theta is pre-expanded for
// the cubic model; unused for the well-specified one.
void draw_observation(const DgpSpec& spec, const Vector& theta, RngStream& rng,
                      std::span<double> x_out, double& y_out) {
    const std::size_t d = spec.d;
    if (spec.kind == DgpKind::WellSpecified) {
        for (std::size_t j = 0; j < d; ++j) x_out[j] = rng.normal();
        y_out = 2.0 * x_out[0] + rng.normal();
        return;
    }
    const double sr = std::sqrt(spec.rho);
    const double sc = std::sqrt(1.0 - spec.rho);
    for (std::size_t j = 0; j < d; ++j) x_out[j] = rng.normal();  // Z
    const double g = rng.normal();
    double lin = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double w = sr * g + sc * rng.normal();
        x_out[j] *= w;
        lin += x_out[j] * theta[j];
    }
    y_out = lin * lin * lin + rng.normal();
}

}  // namespace

Sample generate(const DgpSpec& spec, RngStream rng) {
    spec.validate();
    const Vector theta = theta_vector(spec);
    Matrix x(spec.n, spec.d);
    Vector y(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) draw_observation(spec, theta, rng, x.row(i), y[i]);
    return Sample(std::move(x), std::move(y));
}

GroundTruth ground_truth(const DgpSpec& spec) {
    spec.validate();
    GroundTruth gt;
    if (spec.kind == DgpKind::WellSpecified) {
        gt.beta_star.assign(spec.d, 0.0);
        gt.beta_star[0] = 2.0;
        gt.target = 2.0;
        return gt;
    }
    const Vector theta = theta_vector(spec);
    const double norm_sq = dot(theta, theta);
    const double a = 3.0 * (1.0 + 2.0 * spec.rho * spec.rho) * norm_sq;
    const double b = 6.0 * (1.0 - spec.rho * spec.rho);
    gt.beta_star.resize(spec.d);
    for (std::size_t j = 0; j < spec.d; ++j)
        gt.beta_star[j] = a * theta[j] + b * theta[j] * theta[j] * theta[j];
    gt.target = dot(canonical_contrast(spec), gt.beta_star);
    return gt;
}

KappaEstimate population_kappa_mc(const DgpSpec& spec, const Vector& c,
                                  std::size_t n_pairs, RngStream rng) {
    spec.validate();
    if (c.size() != spec.d) throw Error("contrast dimension mismatch");
    // Both built-in processes expose Sigma = I and the closed-form beta; a
    // process without them would have to raise UnknownPopulation here.
    const GroundTruth gt = ground_truth(spec);
    const Vector theta = theta_vector(spec);
    const double n = double(spec.n);
    const double psi_scale = 1.0 + 1.0 / n;
    const double phi_scale = 1.0 - 1.0 / n;

    const std::size_t chunk = 8192;
    const std::size_t nchunks = (n_pairs + chunk - 1) / chunk;
    Vector sum_k(nchunks, 0.0), sum_k2(nchunks, 0.0);
    Vector sum_g(nchunks, 0.0), sum_g2(nchunks, 0.0);

#pragma omp parallel
    {
        Vector x1(spec.d), x2(spec.d);
#pragma omp for schedule(static)
        for (std::int64_t cidx = 0; cidx < std::int64_t(nchunks); ++cidx) {
            RngStream stream = rng.substream(uint64_t(cidx));
            const std::size_t lo = std::size_t(cidx) * chunk;
            const std::size_t hi = std::min(n_pairs, lo + chunk);
            double sk = 0.0, sk2 = 0.0, sg = 0.0, sg2 = 0.0;
            for (std::size_t p = lo; p < hi; ++p) {
                double y1, y2;
                draw_observation(spec, theta, stream, x1, y1);
                draw_observation(spec, theta, stream, x2, y2);
                const double e1 = y1 - dot(x1, gt.beta_star);
                const double e2 = y2 - dot(x2, gt.beta_star);
                const double cx1 = dot(c, x1);
                const double cx2 = dot(c, x2);
                const double g1 = cx1 * e1;  // c^T Sigma^{-1} X (Y - X.beta), Sigma = I
                const double g2 = cx2 * e2;
                const double cpsi1 = psi_scale * g1;
                const double cpsi2 = psi_scale * g2;
                const double cphi = phi_scale * (cx2 - cx1 * dot(x1, x2)) * e2;
                const double k = cpsi1 * cpsi2 * cphi;
                sk += k;
                sk2 += k * k;
                sg += g1 + g2;
                sg2 += g1 * g1 + g2 * g2;
            }
            sum_k[cidx] = sk;
            sum_k2[cidx] = sk2;
            sum_g[cidx] = sg;
            sum_g2[cidx] = sg2;
        }
    }

    double tk = 0.0, tk2 = 0.0, tg = 0.0, tg2 = 0.0;
    for (std::size_t i = 0; i < nchunks; ++i) {
        tk += sum_k[i];
        tk2 += sum_k2[i];
        tg += sum_g[i];
        tg2 += sum_g2[i];
    }
    const double np = double(n_pairs);
    const double mean_k = tk / np;
    const double var_k = std::max(0.0, tk2 / np - mean_k * mean_k);
    const double ng = 2.0 * np;
    const double mean_g = tg / ng;
    const double sigma_c2 = std::max(0.0, tg2 / ng - mean_g * mean_g);
    const double sigma_c3 = std::pow(sigma_c2, 1.5);

    const double factor = (n * (n - 1.0) / 2.0) / std::pow(n, 2.5);
    const double value = factor * mean_k / sigma_c3;
    const double se = factor * std::sqrt(var_k / np) / sigma_c3;
    return {value, se};
}

}  // namespace leanreg
