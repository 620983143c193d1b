#pragma once

#include <cstdint>

#include "leanreg/estimation.hpp"
#include "leanreg/rng.hpp"

namespace leanreg {

enum class DgpKind { WellSpecified, MisspecifiedCubic };
enum class ThetaKind { FirstCoordinate, UniformUnit };

/// Full parameterization of a synthetic data-generating process. Both
/// built-in processes have population gram matrix I_d and a closed-form
/// projection parameter.
struct DgpSpec {
    DgpKind kind = DgpKind::WellSpecified;
    std::size_t n = 0;
    std::size_t d = 0;
    double rho = 0.0;  // compound-symmetry parameter, cubic model only
    ThetaKind theta = ThetaKind::FirstCoordinate;
    uint64_t seed = 0;

    void validate() const;
};

struct GroundTruth {
    Vector beta_star;
    double target;             // c^T beta for the canonical contrast
    bool sigma_identity = true;  // population gram is I_d for both kinds
};

/// theta as a concrete d-vector (e_1 or 1_d / sqrt(d)).
Vector theta_vector(const DgpSpec& spec);

/// Canonical contrast: e_1 for the well-specified model, theta for the
/// misspecified cubic model.
Vector canonical_contrast(const DgpSpec& spec);

/// Draw a sample. The well-specified model is Y = 2 X(1) + eps with
/// X ~ N(0, I). The cubic model multiplies Z ~ N(0, I) entrywise with
/// W = sqrt(rho) g 1 + sqrt(1-rho) h (so Cov(W) = (1-rho) I + rho 11^T) and
/// sets Y = (X . theta)^3 + eps.
Sample generate(const DgpSpec& spec, RngStream rng);

GroundTruth ground_truth(const DgpSpec& spec);

struct KappaEstimate {
    double value;
    double std_error;
};

/// Monte Carlo estimate of the skewness-adjustment coefficient for the
/// contrast c at the process's sample size, from n_pairs independent pairs
/// of observations evaluated at the population parameters.
KappaEstimate population_kappa_mc(const DgpSpec& spec, const Vector& c,
                                  std::size_t n_pairs, RngStream rng);

}  // namespace leanreg
