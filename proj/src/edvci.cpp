#include "ruinkit/edvci.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ruinkit/numeric.hpp"
#include "ruinkit/scale.hpp"
#include "ruinkit/tilt.hpp"

namespace ruinkit {

GridFunction discounted_upper_integral(const std::function<double(double)>& inner, double phi,
                                       const GridSpec& spec, double tail_scale_hint) {
    if (!inner) throw std::invalid_argument("discounted_upper_integral: integrand required");
    if (!(phi >= 0.0)) throw std::domain_error("discounted_upper_integral: phi must be >= 0");
    const Eigen::Index n = spec.cells;
    const double d = spec.delta();
    auto weighted = [&](double v) { return std::exp(-phi * v) * inner(v); };

    // Per-cell Simpson swept backwards so each node accumulates its whole
    // upper tail; the part beyond the window is integrated adaptively.
    double core = integrate_decaying(weighted, spec.x_max, tail_scale_hint, 1e-12);
    Eigen::ArrayXd vals(spec.nodes());
    vals[n] = core;
    double right = weighted(spec.x_max);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        const double a = i * d;
        const double left = weighted(a);
        core += (d / 6.0) * (left + 4.0 * weighted(a + 0.5 * d) + right);
        vals[i] = core;
        right = left;
    }
    for (Eigen::Index i = 0; i <= n; ++i) vals[i] *= std::exp(phi * i * d);
    return GridFunction(spec, 0.0, std::move(vals));
}

namespace {

double claim_scale(const LevyModel& model) {
    const double lam = model.measure.lambda_total();
    return std::max(1.0, lam > 0.0 ? model.measure.mean() / lam : 1.0);
}

}  // namespace

GridFunction h_func(const LevyModel& model, double q, const GridSpec& spec) {
    const double phi = phi_inverse(model, q);
    const auto& m = model.measure;
    return discounted_upper_integral([&m](double v) { return m.integrated_tail(v); }, phi, spec,
                                     claim_scale(model));
}

GridFunction t_func(const LevyModel& model, double q, const GridSpec& spec) {
    const double phi = phi_inverse(model, q);
    const auto& m = model.measure;
    return discounted_upper_integral([&m](double v) { return m.tail(v); }, phi, spec,
                                     claim_scale(model));
}

double kappa(const LevyModel& model, double q, double x, const GridSpec& spec) {
    if (!(x >= 0.0)) throw std::domain_error("kappa: x must be >= 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("kappa: x outside the grid window");
    const GridFunction f = f1(model, q, spec);
    double out = convolve(f, t_func(model, q, spec)).value_at(x);
    // Continuous crossings are invisible to the claim-tail part; they enter
    // through the scale density directly.
    if (model.sigma > 0.0) out += 0.5 * model.sigma * model.sigma * f.value_at(x);
    return out;
}

double varphi(const LevyModel& model, double q, double x, const GridSpec& spec) {
    if (!(x >= 0.0)) throw std::domain_error("varphi: x must be >= 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("varphi: x outside the grid window");
    return convolve(f1(model, q, spec), h_func(model, q, spec)).value_at(x);
}

double xi(const LevyModel& model, double q) {
    if (!(q >= 0.0)) throw std::domain_error("xi: q must be >= 0");
    if (q == 0.0) return rho(model);  // documented limit
    const double phi = phi_inverse(model, q);
    return 1.0 - 2.0 * q / (phi * (2.0 * model.c + model.sigma * model.sigma * phi));
}

double delta(const LevyModel& model, double q) {
    if (!(q >= 0.0)) throw std::domain_error("delta: q must be >= 0");
    if (q == 0.0)  // documented limit
        return (model.measure.second_moment() + rho(model) * model.sigma * model.sigma) /
               (2.0 * model.c);
    const double phi = phi_inverse(model, q);
    const double denom = phi * (2.0 * model.c + model.sigma * model.sigma * phi);
    return (2.0 * model.c / denom) * (2.0 * q / denom + rho(model) - 1.0);
}

EdvciReport edvci_value(const LevyModel& model, double q, double x, const GridSpec& spec) {
    if (!(q >= 1e-4))
        throw std::domain_error("edvci_value: q must be >= 1e-4 (no undiscounted total)");
    if (!(x >= 0.0)) throw std::domain_error("edvci_value: x must be >= 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("edvci_value: x outside the grid window");

    EdvciReport r;
    const GridFunction f = f1(model, q, spec);
    r.kappa = convolve(f, t_func(model, q, spec)).value_at(x);
    if (model.sigma > 0.0) r.kappa += 0.5 * model.sigma * model.sigma * f.value_at(x);
    r.varphi = convolve(f, h_func(model, q, spec)).value_at(x);
    r.xi = xi(model, q);
    r.delta = delta(model, q);
    if (!(r.xi < 1.0)) throw std::runtime_error("edvci_value: record discount factor reached 1");
    r.value = r.varphi + r.delta / (1.0 - r.xi) * r.kappa;

    if (model.sigma == 0.0) {
        // Independent drift-only reduction, kept as a cross-check output.
        const double phi = phi_inverse(model, q);
        const double xi0 = 1.0 - q / (model.c * phi);
        const double delta0 = (q - (model.c - model.measure.mean()) * phi) / (model.c * phi * phi);
        r.classical_value = r.varphi + delta0 / (1.0 - xi0) * r.kappa;
    }
    return r;
}

}  // namespace ruinkit
