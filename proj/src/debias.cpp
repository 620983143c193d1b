#include "leanreg/debias.hpp"

namespace leanreg {

namespace {

Vector subtract(const Vector& a, const Vector& b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

}  // namespace

DebiasResult moment_bias(const Sample& sample, const FitResult& fit) {
    const std::size_t n = sample.n();
    Vector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = fit.residuals[i] * fit.leverage_norms[i];
    Vector s = weighted_rowsum(sample.x, w);
    const double scale = -1.0 / (double(n) * double(n));
    for (double& v : s) v *= scale;
    Vector bias = fit.gram.solve(s);
    return {bias, subtract(fit.beta_hat, bias), DebiasMethod::MomentBias};
}

DebiasResult jackknife_debias(const Sample& sample, const FitResult& fit) {
    const std::size_t n = sample.n(), d = sample.d();
    const std::vector<Vector> loo = loo_fits(sample, fit);
    Vector loo_sum(d, 0.0);
    for (const Vector& b : loo) axpy(1.0, b, loo_sum);

    const double nn = double(n);
    Vector beta_jk(d);
    for (std::size_t k = 0; k < d; ++k)
        beta_jk[k] = nn * fit.beta_hat[k] - (nn - 1.0) / nn * loo_sum[k];
    return {subtract(fit.beta_hat, beta_jk), beta_jk, DebiasMethod::Jackknife};
}

Vector true_bias_oracle(const DgpSpec& dgp, const Sample& sample, const Vector& beta_star) {
    const GroundTruth gt = ground_truth(dgp);
    if (!gt.sigma_identity) throw UnknownPopulation();
    const std::size_t n = sample.n(), d = sample.d();
    if (beta_star.size() != d) throw Error("beta_star dimension mismatch");

    // Sigma = I_d: leverage reduces to the plain squared row norm.
    Vector fitted = row_dots(sample.x, beta_star);
    Vector w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double norm_sq = dot(sample.x.row(i), sample.x.row(i));
        w[i] = (sample.y[i] - fitted[i]) * norm_sq;
    }
    Vector bias = weighted_rowsum(sample.x, w);
    const double scale = -1.0 / (double(n) * double(n));
    for (double& v : bias) v *= scale;
    return bias;
}

}  // namespace leanreg
