#include "leanreg/variance.hpp"

#include "leanreg/debias.hpp"

namespace leanreg {

ContrastVariance sandwich(const Sample& sample, const FitResult& fit, const Vector& c,
                          ResidualSource residual_source, bool keep_meat,
                          bool df_correction) {
    const std::size_t n = sample.n(), d = sample.d();
    if (c.size() != d) throw Error("contrast dimension mismatch");
    if (norm2(c) == 0.0) throw ZeroContrast();

    const Vector* resid = &fit.residuals;
    Vector bc_resid;
    if (residual_source == ResidualSource::BcResiduals) {
        const DebiasResult db = moment_bias(sample, fit);
        Vector fitted = row_dots(sample.x, db.beta_bc);
        bc_resid.resize(n);
        for (std::size_t i = 0; i < n; ++i) bc_resid[i] = sample.y[i] - fitted[i];
        resid = &bc_resid;
    }

    const Vector w = fit.gram.solve(c);
    double sigma2 = weighted_sq_contraction(sample.x, w, *resid) / double(n);
    if (df_correction) sigma2 *= double(n) / double(n - d);

    ContrastVariance out{sigma2, c, std::nullopt};
    if (keep_meat) out.meat = meat_matrix(sample.x, *resid);
    return out;
}

}  // namespace leanreg
