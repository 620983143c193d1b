#pragma once

#include <string>
#include <vector>

#include "leanreg/debias.hpp"
#include "leanreg/estimation.hpp"
#include "leanreg/rng.hpp"
#include "leanreg/variance.hpp"

namespace leanreg {

enum class CiMethod { Wald, HulC, TStat, WildBootstrap, PairsBootstrap };

std::string method_name(CiMethod m);

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;  // 1 - alpha
    CiMethod method = CiMethod::Wald;
    double point = 0.0;
    bool degenerate = false;  // all bootstrap pivots identical

    double width() const { return upper - lower; }
    bool covers(double target) const { return lower <= target && target <= upper; }
};

enum class WeightLaw { MammenTwoPoint, StandardNormal };

struct BootstrapSpec {
    int n_boot = 1000;
    WeightLaw weight_law = WeightLaw::MammenTwoPoint;
    bool debias_in_boot = true;
    /// Center the bootstrap pivot at c^T beta_bc instead of c^T beta_hat.
    bool center_boot_at_bc = false;
};

/// Two-point multiplier with mean 0 and unit second and third moments:
/// -(sqrt 5 - 1)/2 with probability (sqrt 5 + 1)/(2 sqrt 5), else (sqrt 5 + 1)/2.
namespace mammen {
double atom_neg();
double atom_pos();
double prob_neg();
double draw(RngStream& rng);
}  // namespace mammen

/// inf-CDF empirical quantile: the ceil(p * B)-th order statistic (1-indexed).
double empirical_quantile(std::vector<double> values, double p);

/// Wald interval around c^T beta_bc with the sandwich scale. The rng argument
/// is unused; it keeps the method signatures interchangeable.
ConfidenceInterval wald_ci(const Sample& sample, const Vector& c, double alpha,
                           RngStream rng = RngStream());

/// Convex hull of per-batch bias-corrected estimates with a randomized batch
/// count: B = ceil(log2(2/alpha)), tau = 2^(B-1) alpha - 1, B* = B - 1 with
/// probability tau.
ConfidenceInterval hulc_ci(const Sample& sample, const Vector& c, double alpha,
                           RngStream rng);

/// t-interval from n_batches disjoint-split estimates.
ConfidenceInterval tstat_ci(const Sample& sample, const Vector& c, double alpha,
                            int n_batches, RngStream rng);

/// Wild bootstrap: responses resampled as fitted value plus weighted residual
/// with X fixed; gram factor and leverages reused across replicates.
ConfidenceInterval wild_bootstrap_ci(const Sample& sample, const Vector& c, double alpha,
                                     const BootstrapSpec& spec, RngStream rng);

/// Pairs (row-resampling) bootstrap with a full refit per replicate. Singular
/// resamples are redrawn up to 10 times, then skipped; more than 10% skips
/// raises BootstrapDegenerate.
ConfidenceInterval pairs_bootstrap_ci(const Sample& sample, const Vector& c, double alpha,
                                      const BootstrapSpec& spec, RngStream rng);

namespace detail {

struct HulcPlan {
    int b;       // ceil(log2(2 / alpha))
    double tau;  // 2^(b-1) alpha - 1
};
HulcPlan hulc_plan(double alpha);

/// t-interval assembled from batch estimates (mean +/- t s / sqrt(B)).
ConfidenceInterval t_interval(const std::vector<double>& batch_estimates, double alpha);

/// Seeded uniform permutation of 0..n-1 followed by contiguous batches; the
/// first n mod b batches take the extra observation.
std::vector<std::vector<std::size_t>> split_batches(std::size_t n, int b, RngStream& rng);

/// Sample restricted to the given rows.
Sample gather_rows(const Sample& sample, std::span<const std::size_t> rows);

/// Pivot statistic of one pairs-bootstrap resample.
double pairs_stat(const Sample& sample, const Vector& c, double center,
                  const BootstrapSpec& spec, std::span<const std::size_t> rows);

}  // namespace detail

}  // namespace leanreg
