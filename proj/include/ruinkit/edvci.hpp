#pragma once

#include <functional>
#include <optional>

#include "ruinkit/grid.hpp"
#include "ruinkit/levy_model.hpp"

namespace ruinkit {

/// F(x) = e^{phi x} * integral_x^inf e^{-phi v} inner(v) dv, sampled at the
/// grid nodes.  Per-cell Simpson inside the window plus an adaptive tail
/// beyond it; inner must be nonnegative and decaying.
GridFunction discounted_upper_integral(const std::function<double(double)>& inner, double phi,
                                       const GridSpec& spec, double tail_scale_hint);

/// Discounted integrated claim tail: h(x) = e^{Phi x} int_x^inf e^{-Phi v} I(v) dv
/// with I the integrated tail of the claim measure.  Building block for the
/// expected discounted deficit.
GridFunction h_func(const LevyModel& model, double q, const GridSpec& spec);

/// Discounted claim tail: t(x) = e^{Phi x} int_x^inf e^{-Phi v} N(v) dv with N
/// the claim tail.  Building block for the ruin-time transform.
GridFunction t_func(const LevyModel& model, double q, const GridSpec& spec);

/// kappa(q, x) = E[e^{-q tau_x}; tau_x < inf]: discounted transform of the
/// ruin time from initial surplus x.  Equals the ruin probability at q = 0.
double kappa(const LevyModel& model, double q, double x, const GridSpec& spec);

/// varphi(q, x) = E[e^{-q tau_x} * deficit; tau_x < inf]: expected discounted
/// deficit at ruin (the first capital injection).
double varphi(const LevyModel& model, double q, double x, const GridSpec& spec);

/// xi(q) = E[e^{-q tau}; tau < inf] for the first jump-record from a zero
/// start; lies in (0, 1) for q > 0.  q = 0 returns the limit value rho.
double xi(const LevyModel& model, double q);

/// delta(q) = E[e^{-q tau} * overshoot; tau < inf] for the first jump-record
/// from a zero start.  q = 0 returns the limit (E[S_1^2] + rho sigma^2) / (2c).
double delta(const LevyModel& model, double q);

struct EdvciReport {
    double varphi = 0.0;   // expected discounted deficit at ruin
    double kappa = 0.0;    // discounted ruin-time transform
    double xi = 0.0;       // per-record discount factor, in [0, 1)
    double delta = 0.0;    // per-record discounted injection size
    double value = 0.0;    // total expected discounted value of capital injections
    std::optional<double> classical_value;  // sigma = 0 reduction, when applicable
};

/// Total expected discounted value of capital injections from surplus x:
/// value = varphi + delta / (1 - xi) * kappa, exactly by construction.
/// Requires q >= 1e-4; the undiscounted case is not defined here.
EdvciReport edvci_value(const LevyModel& model, double q, double x, const GridSpec& spec);

}  // namespace ruinkit
