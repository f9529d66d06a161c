#include "ruinkit/scale.hpp"

#include <cmath>

namespace ruinkit {

SurvivalResult pk_survival(const TiltedModel& tilted, const GridSpec& spec) {
    const double rho_t = tilted.rho_tilde;
    if (!(rho_t > 0.0 && rho_t < 1.0))
        throw std::domain_error("pk_survival: tilted loading ratio must lie in (0,1)");

    const GridFunction g = g_density(tilted, spec);
    // Ladder-height factor, normalized to unit mass so the series weights are
    // exactly rho_tilde^n; the grid mass absorbs any window truncation.
    GridFunction unit_ladder = h_density(tilted, spec);
    unit_ladder.normalize_to(1.0);

    const GridFunction base = convolve(unit_ladder, g);
    SeriesResult series = geometric_convolution_series(base, rho_t, g);

    const Eigen::ArrayXd cum = series.value.cumulative();
    GridFunction cdf(spec, (1.0 - rho_t) * series.value.atom0(),
                     (1.0 - rho_t) * cum);
    SurvivalResult out{std::move(cdf), series.terms, series.tail_bound, false};
    out.truncated = (1.0 - out.cdf.values()[spec.cells]) > 1e-3;
    return out;
}

ScaleResult scale_function_tilted(const TiltedModel& tilted, const GridSpec& spec) {
    SurvivalResult s = pk_survival(tilted, spec);
    const double scale = 1.0 / (tilted.c_tilde * (1.0 - tilted.rho_tilde));
    s.cdf.scale(scale);
    return ScaleResult{std::move(s.cdf), s.truncated};
}

ScaleResult scale_function(const LevyModel& model, double q, const GridSpec& spec) {
    const TiltedModel t = tilt_model(model, q);
    ScaleResult r = scale_function_tilted(t, spec);
    if (t.phi_q != 0.0) {
        const Eigen::ArrayXd x = spec.abscissae();
        r.fn.values() *= (t.phi_q * x).exp();
    }
    return r;
}

GridFunction f1(const LevyModel& model, double q, const GridSpec& spec) {
    const TiltedModel t = tilt_model(model, q);
    const ScaleResult w = scale_function_tilted(t, spec);
    const Eigen::ArrayXd& v = w.fn.values();
    const Eigen::Index n = spec.cells;
    const double d = spec.delta();

    // Central differences inside, second-order one-sided at the ends; the
    // stencil weights sum to zero so the constant sigma=0 atom drops out.
    Eigen::ArrayXd der(spec.nodes());
    der[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * d);
    for (Eigen::Index i = 1; i < n; ++i) der[i] = (v[i + 1] - v[i - 1]) / (2.0 * d);
    der[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * d);

    if (t.phi_q != 0.0) der *= (t.phi_q * spec.abscissae()).exp();
    der = der.max(0.0);  // clamp finite-difference noise; the exact object is >= 0

    // The atom is the scale function's jump at 0: 1/c_tilde when sigma == 0
    // exactly, and also when the grid cannot resolve the diffusion boundary
    // layer and g collapsed to a point mass.  The computed cdf already
    // carries that jump, so reuse it instead of re-testing sigma.
    return GridFunction(spec, w.fn.atom0(), std::move(der));
}

}  // namespace ruinkit
