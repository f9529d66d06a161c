#include "ruinkit/tilt.hpp"

#include <cmath>

namespace ruinkit {

TiltedModel tilt_model(const LevyModel& model, double q) {
    if (q < 0.0) throw std::domain_error("tilt_model: q must be nonnegative");
    TiltedModel t{model, q, 0.0, 0.0, 0.0};
    t.phi_q = phi_inverse(model, q);
    t.c_tilde = model.c + model.sigma * model.sigma * t.phi_q;
    t.rho_tilde = t.tilted_mean() / t.c_tilde;
    return t;
}

GridFunction g_density(double drift, double sigma, const GridSpec& spec) {
    if (sigma == 0.0) return GridFunction::dirac(spec, 1.0);
    if (!(drift > 0.0)) throw std::domain_error("g_density: drift must be positive");
    const double rate = 2.0 * drift / (sigma * sigma);
    const double d = spec.delta();
    // Steeper than the grid can resolve: the whole mass sits in a fraction of
    // the first cell, so the Dirac representation is the faithful one.
    if (rate * d > 8.0) return GridFunction::dirac(spec, 1.0);

    // Cell-averaged samples: node i owns [x_i - d/2, x_i + d/2] clipped to the
    // domain, whose widths match the trapezoid weights, so the sampled mass is
    // exactly the cell mass and trapezoid integration reproduces it.
    Eigen::ArrayXd v(spec.nodes());
    auto cdf = [&](double x) { return -std::expm1(-rate * x); };
    v[0] = cdf(0.5 * d) / (0.5 * d);
    for (Eigen::Index i = 1; i < spec.cells; ++i) {
        const double x = static_cast<double>(i) * d;
        v[i] = (cdf(x + 0.5 * d) - cdf(x - 0.5 * d)) / d;
    }
    v[spec.cells] = (cdf(spec.x_max) - cdf(spec.x_max - 0.5 * d)) / (0.5 * d);
    GridFunction g(spec, 0.0, std::move(v));
    g.normalize_to(1.0);
    return g;
}

GridFunction g_density(const LevyModel& model, const GridSpec& spec) {
    return g_density(model.c, model.sigma, spec);
}

GridFunction g_density(const TiltedModel& tilted, const GridSpec& spec) {
    return g_density(tilted.c_tilde, tilted.base.sigma, spec);
}

GridFunction h_density(const LevyModel& model, const GridSpec& spec) {
    auto f = GridFunction::from_density(
        spec, [&](double u) { return model.measure.tail(u) / model.c; });
    return f;
}

GridFunction h_density(const TiltedModel& tilted, const GridSpec& spec) {
    return GridFunction::from_density(
        spec, [&](double u) { return tilted.tilted_tail(u) / tilted.c_tilde; });
}

GridFunction overshoot_law_at_tau(const LevyModel& model, const GridSpec& spec) {
    return convolve(h_density(model, spec), g_density(model, spec));
}

GridFunction overshoot_law_at_tau(const TiltedModel& tilted, const GridSpec& spec) {
    return convolve(h_density(tilted, spec), g_density(tilted, spec));
}

}  // namespace ruinkit
