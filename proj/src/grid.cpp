#include "ruinkit/grid.hpp"

#include <cmath>
#include <limits>

namespace ruinkit {

double GridFunction::value_at(double x) const {
    if (x < 0.0 || x > spec_.x_max) return 0.0;
    const double d = spec_.delta();
    const double pos = x / d;
    const auto i = static_cast<Eigen::Index>(pos);
    if (i >= spec_.cells) return values_[spec_.cells];
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double trapezoid(const Eigen::ArrayXd& v, double delta) {
    if (v.size() < 2) return 0.0;
    return delta * (v.sum() - 0.5 * (v[0] + v[v.size() - 1]));
}

double GridFunction::mass() const { return atom0_ + trapezoid(values_, delta()); }

Eigen::ArrayXd GridFunction::cumulative() const {
    Eigen::ArrayXd out(values_.size());
    const double d = delta();
    double acc = atom0_;
    out[0] = acc;
    for (Eigen::Index i = 1; i < values_.size(); ++i) {
        acc += 0.5 * d * (values_[i - 1] + values_[i]);
        out[i] = acc;
    }
    return out;
}

GridFunction& GridFunction::axpy(double a, const GridFunction& g) {
    if (!spec_.same_as(g.spec())) throw std::invalid_argument("axpy: grid mismatch");
    atom0_ += a * g.atom0();
    values_ += a * g.values();
    return *this;
}

GridFunction& GridFunction::normalize_to(double target) {
    const double m = mass();
    if (m <= 0.0) throw std::domain_error("normalize_to: nonpositive mass");
    return scale(target / m);
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    if (!f.spec().same_as(g.spec())) throw std::invalid_argument("convolve: grid mismatch");
    const GridSpec& spec = f.spec();
    const Eigen::Index n = spec.nodes();
    const double d = spec.delta();

    const Eigen::ArrayXd& fv = f.values();
    const Eigen::ArrayXd gr = g.values().reverse();

    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
    // (f*g)(x_i) = int_0^{x_i} f(u) g(x_i - u) du by trapezoid on the common grid;
    // the i = 0 value of the continuous part is exactly zero.
    for (Eigen::Index i = 1; i < n; ++i) {
        const double dot = (fv.head(i + 1) * gr.segment(n - 1 - i, i + 1)).sum();
        out[i] = d * (dot - 0.5 * (fv[0] * g.values()[i] + fv[i] * g.values()[0]));
    }
    out += f.atom0() * g.values() + g.atom0() * f.values();
    return GridFunction(spec, f.atom0() * g.atom0(), std::move(out));
}

SeriesResult geometric_convolution_series(const GridFunction& base, double weight,
                                          const GridFunction& lead) {
    if (!(weight >= 0.0 && weight < 1.0))
        throw std::domain_error("geometric_convolution_series: weight must lie in [0, 1)");
    const double mb = base.mass();
    const double ml = lead.mass();
    const double r = weight * mb;
    if (r >= 1.0)
        throw std::domain_error(
            "geometric_convolution_series: weight * base mass >= 1, series diverges");

    GridFunction acc = lead;    // n = 0 term
    GridFunction term = lead;   // lead * base^{*n}
    double bound = r * ml;      // a-priori mass of the next term
    int terms = 1;
    constexpr double kTol = 1e-12;
    constexpr int kMaxTerms = 10000;
    // Stop when the whole remaining tail sum bound / (1 - r) drops below kTol.
    while (bound >= kTol * (1.0 - r) && terms < kMaxTerms) {
        term = convolve(term, base);
        acc.axpy(std::pow(weight, terms), term);
        ++terms;
        bound *= r;
    }
    return SeriesResult{std::move(acc), terms, bound / (1.0 - r)};
}

}  // namespace ruinkit
