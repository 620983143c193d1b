#include "leanreg/inference.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>

namespace leanreg {

std::string method_name(CiMethod m) {
    switch (m) {
        case CiMethod::Wald: return "wald";
        case CiMethod::HulC: return "hulc";
        case CiMethod::TStat: return "tstat";
        case CiMethod::WildBootstrap: return "wild";
        case CiMethod::PairsBootstrap: return "pairs";
    }
    return "?";
}

namespace mammen {

double atom_neg() { return -(std::sqrt(5.0) - 1.0) / 2.0; }
double atom_pos() { return (std::sqrt(5.0) + 1.0) / 2.0; }
double prob_neg() { return (std::sqrt(5.0) + 1.0) / (2.0 * std::sqrt(5.0)); }

double draw(RngStream& rng) {
    return rng.uniform01() < prob_neg() ? atom_neg() : atom_pos();
}

}  // namespace mammen

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void warn_small_boot(const BootstrapSpec& spec) {
    if (spec.n_boot < 1) throw DomainError("n_boot must be positive");
    if (spec.n_boot < 100)
        std::cerr << "leanreg: warning: n_boot=" << spec.n_boot
                  << " is below 100; bootstrap quantiles will be coarse\n";
}

double boot_weight(WeightLaw law, RngStream& rng) {
    return law == WeightLaw::MammenTwoPoint ? mammen::draw(rng) : rng.normal();
}

struct BootPivots {
    std::vector<double> t;
    bool degenerate = false;
};

ConfidenceInterval pivot_interval(BootPivots pivots, double center, double alpha,
                                  CiMethod method) {
    ConfidenceInterval ci;
    ci.method = method;
    ci.level = 1.0 - alpha;
    ci.point = center;
    ci.degenerate = pivots.degenerate;
    const double q_hi = empirical_quantile(pivots.t, 1.0 - alpha / 2.0);
    const double q_lo = empirical_quantile(std::move(pivots.t), alpha / 2.0);
    ci.lower = center - q_hi;
    ci.upper = center - q_lo;
    return ci;
}

}  // namespace

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw EmptyInput();
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
    std::sort(values.begin(), values.end());
    const std::size_t b = values.size();
    std::size_t k = std::size_t(std::ceil(p * double(b)));
    k = std::clamp<std::size_t>(k, 1, b);
    return values[k - 1];
}

ConfidenceInterval wald_ci(const Sample& sample, const Vector& c, double alpha,
                           RngStream /*rng_unused*/) {
    check_alpha(alpha);
    const FitResult fit = ols_fit(sample);
    const DebiasResult db = moment_bias(sample, fit);
    const ContrastVariance v = sandwich(sample, fit, c);
    const double point = dot(c, db.beta_bc);
    const double half =
        normal_quantile(1.0 - alpha / 2.0) * std::sqrt(v.sigma2_hat / double(sample.n()));
    return {point - half, point + half, 1.0 - alpha, CiMethod::Wald, point, half == 0.0};
}

namespace detail {

HulcPlan hulc_plan(double alpha) {
    check_alpha(alpha);
    const int b = int(std::ceil(std::log2(2.0 / alpha)));
    return {b, std::ldexp(alpha, b - 1) - 1.0};
}

ConfidenceInterval t_interval(const std::vector<double>& batch_estimates, double alpha) {
    check_alpha(alpha);
    if (batch_estimates.size() < 2) throw DomainError("need at least 2 batch estimates");
    const double b = double(batch_estimates.size());
    const double m =
        std::accumulate(batch_estimates.begin(), batch_estimates.end(), 0.0) / b;
    double ss = 0.0;
    for (double e : batch_estimates) ss += (e - m) * (e - m);
    const double s = std::sqrt(ss / (b - 1.0));
    const double half =
        student_t_quantile(1.0 - alpha / 2.0, int(batch_estimates.size()) - 1) * s / std::sqrt(b);
    return {m - half, m + half, 1.0 - alpha, CiMethod::TStat, m, half == 0.0};
}

std::vector<std::vector<std::size_t>> split_batches(std::size_t n, int b, RngStream& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t(0));
    for (std::size_t i = n; i-- > 1;)
        std::swap(perm[i], perm[rng.below(i + 1)]);

    const std::size_t nb = std::size_t(b);
    const std::size_t base = n / nb, rem = n % nb;
    std::vector<std::vector<std::size_t>> batches(nb);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < nb; ++i) {
        const std::size_t len = base + (i < rem ? 1 : 0);
        batches[i].assign(perm.begin() + pos, perm.begin() + pos + len);
        pos += len;
    }
    return batches;
}

Sample gather_rows(const Sample& sample, std::span<const std::size_t> rows) {
    const std::size_t d = sample.d();
    Matrix x(rows.size(), d);
    Vector y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = sample.x.row(rows[i]);
        std::copy(src.begin(), src.end(), x.row(i).begin());
        y[i] = sample.y[rows[i]];
    }
    return Sample(std::move(x), std::move(y));
}

double pairs_stat(const Sample& sample, const Vector& c, double center,
                  const BootstrapSpec& spec, std::span<const std::size_t> rows) {
    const Sample resample = gather_rows(sample, rows);
    const FitResult fit = ols_fit(resample);
    const Vector& beta =
        spec.debias_in_boot ? moment_bias(resample, fit).beta_bc : fit.beta_hat;
    return dot(c, beta) - center;
}

}  // namespace detail

namespace {

std::vector<double> batch_bc_estimates(const Sample& sample, const Vector& c, int b,
                                       RngStream& rng) {
    const std::size_t n = sample.n(), d = sample.d();
    if (n / std::size_t(b) <= d) throw BatchTooSmall(b, n, d);
    const auto batches = detail::split_batches(n, b, rng);
    std::vector<double> est(batches.size());
    for (std::size_t i = 0; i < batches.size(); ++i) {
        const Sample part = detail::gather_rows(sample, batches[i]);
        const FitResult fit = ols_fit(part);
        est[i] = dot(c, moment_bias(part, fit).beta_bc);
    }
    return est;
}

}  // namespace

ConfidenceInterval hulc_ci(const Sample& sample, const Vector& c, double alpha,
                           RngStream rng) {
    const auto [b_max, tau] = detail::hulc_plan(alpha);
    const double u = rng.uniform01();
    const int b_star = (u <= tau) ? b_max - 1 : b_max;

    const std::vector<double> est = batch_bc_estimates(sample, c, b_star, rng);
    const auto [lo, hi] = std::minmax_element(est.begin(), est.end());
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / double(est.size());
    return {*lo, *hi, 1.0 - alpha, CiMethod::HulC, mean, *lo == *hi};
}

ConfidenceInterval tstat_ci(const Sample& sample, const Vector& c, double alpha,
                            int n_batches, RngStream rng) {
    check_alpha(alpha);
    if (n_batches < 2) throw DomainError("t-statistic split needs at least 2 batches");
    return detail::t_interval(batch_bc_estimates(sample, c, n_batches, rng), alpha);
}

ConfidenceInterval wild_bootstrap_ci(const Sample& sample, const Vector& c, double alpha,
                                     const BootstrapSpec& spec, RngStream rng) {
    check_alpha(alpha);
    warn_small_boot(spec);
    const std::size_t n = sample.n();
    const FitResult fit = ols_fit(sample);
    const DebiasResult db = moment_bias(sample, fit);
    const double c_beta = dot(c, fit.beta_hat);
    const double c_beta_bc = dot(c, db.beta_bc);
    const double center = spec.center_boot_at_bc ? c_beta_bc : c_beta;
    const Vector fitted = row_dots(sample.x, fit.beta_hat);

    BootPivots pivots;
    pivots.t.resize(std::size_t(spec.n_boot));
#pragma omp parallel
    {
        Vector y_star(n), w(n);
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < std::int64_t(spec.n_boot); ++b) {
            RngStream stream = rng.substream(uint64_t(b));
            for (std::size_t i = 0; i < n; ++i)
                y_star[i] = fitted[i] + fit.residuals[i] * boot_weight(spec.weight_law, stream);

            Vector gamma = weighted_rowsum(sample.x, y_star);
            for (double& v : gamma) v /= double(n);
            Vector beta_star = fit.gram.solve(gamma);

            if (spec.debias_in_boot) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double r_star = y_star[i] - dot(sample.x.row(i), beta_star);
                    w[i] = r_star * fit.leverage_norms[i];
                }
                Vector s = weighted_rowsum(sample.x, w);
                const double scale = -1.0 / (double(n) * double(n));
                for (double& v : s) v *= scale;
                const Vector bias_star = fit.gram.solve(s);
                for (std::size_t k = 0; k < beta_star.size(); ++k)
                    beta_star[k] -= bias_star[k];
            }
            pivots.t[std::size_t(b)] = dot(c, beta_star) - center;
        }
    }
    pivots.degenerate = std::all_of(pivots.t.begin(), pivots.t.end(),
                                    [&](double v) { return v == pivots.t.front(); });
    return pivot_interval(std::move(pivots), c_beta_bc, alpha, CiMethod::WildBootstrap);
}

ConfidenceInterval pairs_bootstrap_ci(const Sample& sample, const Vector& c, double alpha,
                                      const BootstrapSpec& spec, RngStream rng) {
    check_alpha(alpha);
    warn_small_boot(spec);
    const std::size_t n = sample.n();
    const FitResult fit = ols_fit(sample);
    const DebiasResult db = moment_bias(sample, fit);
    const double c_beta = dot(c, fit.beta_hat);
    const double c_beta_bc = dot(c, db.beta_bc);
    const double center = spec.center_boot_at_bc ? c_beta_bc : c_beta;

    std::vector<double> stats(std::size_t(spec.n_boot));
    std::vector<char> ok(std::size_t(spec.n_boot), 0);
#pragma omp parallel
    {
        std::vector<std::size_t> rows(n);
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t b = 0; b < std::int64_t(spec.n_boot); ++b) {
            RngStream stream = rng.substream(uint64_t(b));
            for (int attempt = 0; attempt <= 10; ++attempt) {
                for (std::size_t i = 0; i < n; ++i) rows[i] = std::size_t(stream.below(n));
                try {
                    stats[std::size_t(b)] = detail::pairs_stat(sample, c, center, spec, rows);
                    ok[std::size_t(b)] = 1;
                    break;
                } catch (const SingularGram&) {
                    // redraw
                }
            }
        }
    }

    BootPivots pivots;
    pivots.t.reserve(stats.size());
    for (std::size_t b = 0; b < stats.size(); ++b)
        if (ok[b]) pivots.t.push_back(stats[b]);
    const std::size_t skipped = stats.size() - pivots.t.size();
    if (skipped * 10 > stats.size())
        throw BootstrapDegenerate("more than 10% of pairs-bootstrap resamples were singular");
    pivots.degenerate = !pivots.t.empty() &&
                        std::all_of(pivots.t.begin(), pivots.t.end(),
                                    [&](double v) { return v == pivots.t.front(); });
    return pivot_interval(std::move(pivots), c_beta_bc, alpha, CiMethod::PairsBootstrap);
}

}  // namespace leanreg
