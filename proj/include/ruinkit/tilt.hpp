#pragma once

#include "ruinkit/grid.hpp"
#include "ruinkit/levy_model.hpp"

namespace ruinkit {

/// Model under the exponential change of measure at phi_q: drift grows to
/// c + sigma^2 phi_q, the jump measure gains the factor e^{-phi_q u}, and the
/// loading ratio shrinks.
struct TiltedModel {
    LevyModel base;
    double q = 0.0;
    double phi_q = 0.0;
    double c_tilde = 0.0;
    double rho_tilde = 0.0;

    /// Tail of the tilted jump measure at u.
    double tilted_tail(double u) const { return base.measure.tilted_tail(u, phi_q); }
    /// Mean jump of the tilted measure per unit time.
    double tilted_mean() const { return base.measure.tilted_mean(phi_q); }
};

TiltedModel tilt_model(const LevyModel& model, double q);

/// Law of the running infimum's excursions' diffusion part: exponential with
/// rate 2c/sigma^2 (sigma > 0), or a Dirac at zero when sigma = 0. Always unit
/// mass. Samples are cell-averaged so the grid carries the exact mass even for
/// steep rates; rates the grid cannot resolve collapse to the Dirac.
GridFunction g_density(double drift, double sigma, const GridSpec& spec);
GridFunction g_density(const LevyModel& model, const GridSpec& spec);
GridFunction g_density(const TiltedModel& tilted, const GridSpec& spec);

/// Ladder-height (record-by-jump) density: N(u)/c, mass rho; tilted variant
/// N_phi(u)/c_tilde, mass rho_tilde. Defective by construction.
GridFunction h_density(const LevyModel& model, const GridSpec& spec);
GridFunction h_density(const TiltedModel& tilted, const GridSpec& spec);

/// Law of the surplus overshoot at the first record epoch: h * g.
GridFunction overshoot_law_at_tau(const LevyModel& model, const GridSpec& spec);
GridFunction overshoot_law_at_tau(const TiltedModel& tilted, const GridSpec& spec);

}  // namespace ruinkit
