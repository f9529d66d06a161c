#include "ruinkit/edpf.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ruinkit/edvci.hpp"
#include "ruinkit/numeric.hpp"
#include "ruinkit/scale.hpp"
#include "ruinkit/tilt.hpp"

namespace ruinkit {

const std::function<double(double, double)>* PenaltySpec::follow_up(int record) const {
    if (record < 2) throw std::domain_error("PenaltySpec: follow-up records start at 2");
    const std::size_t idx = static_cast<std::size_t>(record) - 2;
    if (idx < subsequent.size()) return &subsequent[idx];
    if (tail == PenaltyTail::RepeatLast && !subsequent.empty()) return &subsequent.back();
    return nullptr;
}

void PenaltySpec::validate(double span) const {
    if (!first) throw std::invalid_argument("PenaltySpec: first penalty is required");
    if (!(span > 0.0) || !(bound > 0.0))
        throw std::invalid_argument("PenaltySpec: span and bound must be positive");
    for (const auto& fn : subsequent)
        if (!fn) throw std::invalid_argument("PenaltySpec: empty follow-up entry");

    const double slack = 1e-12 * (1.0 + bound);
    constexpr int kProbe = 17;
    for (int i = 0; i < kProbe; ++i) {
        const double u = span * i / (kProbe - 1);
        if (std::abs(first(u, 0.0)) > 1e-12)
            throw std::invalid_argument("PenaltySpec: first(., 0) must vanish");
        for (int j = 0; j < kProbe; ++j) {
            const double v = span * j / (kProbe - 1);
            const double w = first(u, v);
            if (!std::isfinite(w) || w < -slack || w > bound + slack)
                throw std::invalid_argument("PenaltySpec: first penalty leaves [0, bound]");
            for (const auto& fn : subsequent) {
                const double f = fn(u, u + v);
                if (!std::isfinite(f) || f < -slack || f > bound + slack)
                    throw std::invalid_argument("PenaltySpec: follow-up penalty leaves [0, bound]");
            }
        }
    }
}

GridFunction ruin_overshoot_law(const LevyModel& model, double q, double x, const GridSpec& spec) {
    if (!(x > 0.0)) throw std::domain_error("ruin_overshoot_law: x must be > 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("ruin_overshoot_law: x outside the grid");
    const TiltedModel t = tilt_model(model, q);
    const ScaleResult w = scale_function_tilted(t, spec);
    const double wx = w.fn.value_at(x);
    const double d = spec.delta();
    const auto last_full = static_cast<Eigen::Index>(std::floor(x / d + 1e-9));

    // Overshoot density at dd: e^{-phi dd} times the discounted first-passage
    // weight of every pre-ruin level v, plus the far-tail product for paths
    // that never dip back under their start.
    auto slice = [&](double dd, double v) {
        return std::exp(-t.phi_q * v) * model.measure.density(dd + v) *
               (wx - w.fn.value_at(x - v));
    };
    Eigen::ArrayXd vals(spec.nodes());
    for (Eigen::Index k = 0; k <= spec.cells; ++k) {
        const double dd = k * d;
        double acc = 0.0;
        double prev = slice(dd, 0.0);  // zero: the bracket vanishes at v = 0
        for (Eigen::Index j = 1; j <= last_full; ++j) {
            const double cur = slice(dd, j * d);
            acc += 0.5 * d * (prev + cur);
            prev = cur;
        }
        const double rest = x - static_cast<double>(last_full) * d;
        if (rest > 1e-12) acc += 0.5 * rest * (prev + slice(dd, x));
        vals[k] = std::exp(-t.phi_q * dd) * acc + wx * model.measure.tilted_tail(dd + x, t.phi_q);
    }

    // Continuous crossing concentrates at zero overshoot.
    double creep = 0.0;
    if (model.sigma > 0.0)
        creep = 0.5 * model.sigma * model.sigma * std::exp(-t.phi_q * x) *
                f1(model, q, spec).value_at(x);
    return GridFunction(spec, creep, std::move(vals));
}

namespace {

double claim_scale(const LevyModel& model) {
    const double lam = model.measure.lambda_total();
    return std::max(1.0, lam > 0.0 ? model.measure.mean() / lam : 1.0);
}

// int_{s > v} w(v, s - v) nu(ds): the penalty integrated over all claim sizes
// that drop the surplus v into deficit.
double penalty_claim_integral(const LevyModel& model, const std::function<double(double, double)>& w,
                              double v, double scale) {
    const auto& m = model.measure;
    return integrate_decaying([&](double s) { return w(v, s - v) * m.density(s); }, v, scale,
                              1e-13);
}

}  // namespace

GridFunction f2(const LevyModel& model, double q, const std::function<double(double, double)>& w,
                const GridSpec& spec) {
    if (!w) throw std::invalid_argument("f2: penalty function required");
    const double phi = phi_inverse(model, q);
    const double scale = claim_scale(model);
    return discounted_upper_integral(
        [&](double v) { return penalty_claim_integral(model, w, v, scale); }, phi, spec, scale);
}

double classic_edpf(const LevyModel& model, double q, double x,
                    const std::function<double(double, double)>& w, const GridSpec& spec) {
    if (!(x >= 0.0)) throw std::domain_error("classic_edpf: x must be >= 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("classic_edpf: x outside the grid window");
    return convolve(f1(model, q, spec), f2(model, q, w, spec)).value_at(x);
}

double edpf_scale_form(const LevyModel& model, double q, double x,
                       const std::function<double(double, double)>& w, const GridSpec& spec) {
    if (!(x >= 0.0)) throw std::domain_error("edpf_scale_form: x must be >= 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("edpf_scale_form: x outside the grid window");
    if (!w) throw std::invalid_argument("edpf_scale_form: penalty function required");
    const double phi = phi_inverse(model, q);
    const double scale = claim_scale(model);
    const ScaleResult W = scale_function(model, q, spec);
    const double d = spec.delta();

    // Discounted global weight minus the sub-level correction: W(x) times the
    // full discounted penalty integral, less the penalty against W(x - v).
    auto inner = [&](double v) { return penalty_claim_integral(model, w, v, scale); };
    const double lead =
        discounted_upper_integral(inner, phi, spec, scale).values()[0] * W.fn.value_at(x);

    const auto last_full = static_cast<Eigen::Index>(std::floor(x / d + 1e-9));
    double correction = 0.0;
    double prev = inner(0.0) * W.fn.value_at(x);
    for (Eigen::Index j = 1; j <= last_full; ++j) {
        const double cur = inner(j * d) * W.fn.value_at(x - j * d);
        correction += 0.5 * d * (prev + cur);
        prev = cur;
    }
    const double rest = x - static_cast<double>(last_full) * d;
    if (rest > 1e-12) correction += 0.5 * rest * (prev + inner(x) * W.fn.value_at(0.0));
    return lead - correction;
}

double n_distribution(const LevyModel& model, double q, double x, int n, const GridSpec& spec,
                      bool joint_with_ruin) {
    if (n < 0) throw std::domain_error("n_distribution: n must be >= 0");
    if (!(x > 0.0)) throw std::domain_error("n_distribution: x must be > 0");
    const TiltedModel t = tilt_model(model, q);
    double p = (1.0 - t.rho_tilde) * std::pow(t.rho_tilde, n);
    if (joint_with_ruin) {
        if (!(x <= spec.x_max)) throw std::out_of_range("n_distribution: x outside the grid");
        p *= 1.0 - pk_survival(t, spec).cdf.value_at(x);
    }
    return p;
}

ExtendedEdpfResult extended_edpf(const LevyModel& model, double q, double x,
                                 const PenaltySpec& penalty, const GridSpec& spec) {
    if (!(x > 0.0)) throw std::domain_error("extended_edpf: x must be > 0");
    if (!(x <= spec.x_max)) throw std::out_of_range("extended_edpf: x outside the grid window");
    penalty.validate(spec.x_max);

    const TiltedModel t = tilt_model(model, q);
    ExtendedEdpfResult r;
    r.classic_part = classic_edpf(model, q, x, penalty.first, spec);
    r.value = r.classic_part;

    const GridFunction rec = overshoot_law_at_tau(t, spec);       // per-record increment law
    GridFunction level = ruin_overshoot_law(model, q, x, spec);   // level after ruin, less x
    const double d = spec.delta();
    const Eigen::ArrayXd egrid = (t.phi_q * spec.abscissae()).exp();

    // Discount-undoing weights; their totals are the per-record factor and
    // the ruin transform, and they certify the truncation below.
    Eigen::ArrayXd rec_w = rec.values() * egrid * d;
    rec_w[0] *= 0.5;
    rec_w[spec.cells] *= 0.5;
    const double xi_hat = rec_w.sum() + rec.atom0();
    if (!(xi_hat < 1.0)) throw std::runtime_error("extended_edpf: record series diverges");
    const double ephix = std::exp(t.phi_q * x);
    Eigen::ArrayXd level_w = level.values() * egrid * d;
    level_w[0] *= 0.5;
    level_w[spec.cells] *= 0.5;
    const double kappa_hat = ephix * (level_w.sum() + level.atom0());
    const double geom = penalty.bound * kappa_hat / (1.0 - xi_hat);

    const std::function<double(double, double)>* active = nullptr;
    Eigen::ArrayXd charge(spec.nodes());
    for (int n = 1;; ++n) {
        const auto* fn = penalty.follow_up(n + 1);
        if (fn == nullptr) {
            r.series_tail_bound = 0.0;  // the schedule has ended for good
            break;
        }
        const double remaining = geom * std::pow(xi_hat, n);
        if (remaining < 1e-10) {
            r.series_tail_bound = remaining;
            break;
        }
        if (fn != active) {
            // charge(v) = sum_u e^{phi u} F(x + v, x + v + u) rec(du), reused
            // across records while the follow-up stays the same function.
            const auto& F = *fn;
            for (Eigen::Index i = 0; i <= spec.cells; ++i) {
                const double lv = x + static_cast<double>(i) * d;
                double s = rec.atom0() * F(lv, lv);
                for (Eigen::Index j = 0; j <= spec.cells; ++j)
                    s += rec_w[j] * F(lv, lv + static_cast<double>(j) * d);
                charge[i] = s;
            }
            active = fn;
        }
        r.value += ephix * (level.atom0() * charge[0] +
                            (level.values() * egrid * charge).sum() * d -
                            0.5 * d * (level.values()[0] * charge[0] +
                                       level.values()[spec.cells] * egrid[spec.cells] *
                                           charge[spec.cells]));
        ++r.series_terms;
        if (n > 300) throw std::runtime_error("extended_edpf: record series failed to settle");
        level = convolve(level, rec);
    }
    return r;
}

std::function<double(double, double)> deficit_penalty() {
    return [](double, double deficit) { return deficit; };
}

std::function<double(double, double)> ruin_indicator_penalty() {
    return [](double, double deficit) { return deficit > 0.0 ? 1.0 : 0.0; };
}

std::function<double(double, double)> capped_deficit_penalty(double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("capped_deficit_penalty: cap must be > 0");
    return [cap](double, double deficit) { return std::min(deficit, cap); };
}

std::function<double(double, double)> increment_penalty() {
    return [](double before, double after) { return after - before; };
}

std::function<double(double, double)> capped_increment_penalty(double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("capped_increment_penalty: cap must be > 0");
    return [cap](double before, double after) { return std::min(after - before, cap); };
}

}  // namespace ruinkit
