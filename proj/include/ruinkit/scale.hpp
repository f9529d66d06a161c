#pragma once

#include "ruinkit/grid.hpp"
#include "ruinkit/tilt.hpp"

namespace ruinkit {

/// Survival probability of the tilted surplus as a cumulative grid sample:
/// values[i] = P(no record ever exceeds x_i), atom0 = the jump at 0 (nonzero
/// only when sigma = 0, already included in values[0]).
struct SurvivalResult {
    GridFunction cdf;
    int series_terms = 0;
    double series_tail_bound = 0.0;
    bool truncated = false;  // the grid window cuts off visible mass (> 1e-3)
};

/// Pollaczek-Khinchine compound-geometric survival probability for the tilted
/// model; q = 0 reproduces the untilted one.
SurvivalResult pk_survival(const TiltedModel& tilted, const GridSpec& spec);

/// Cumulative scale-function samples; atom0 = jump at 0 (sigma = 0 only),
/// included in values[0].
struct ScaleResult {
    GridFunction fn;
    bool truncated = false;
};

/// W restricted to the tilted measure: survival / (c_tilde (1 - rho_tilde)).
/// Nondecreasing with limit 1/(c_tilde (1 - rho_tilde)).
ScaleResult scale_function_tilted(const TiltedModel& tilted, const GridSpec& spec);

/// q-scale function W_q(x) = e^{phi_q x} * (tilted scale function)(x).
ScaleResult scale_function(const LevyModel& model, double q, const GridSpec& spec);

/// First ruin-decomposition factor: e^{phi_q x} d/dx of the tilted scale
/// function, finite-differenced on the grid; carries the 1/c_tilde atom at 0
/// when sigma = 0. Nonnegative.
GridFunction f1(const LevyModel& model, double q, const GridSpec& spec);

}  // namespace ruinkit
