#include "ruinkit/levy_model.hpp"

#include "ruinkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ruinkit {
namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

// (1 - e^{-x}) / x, stable near zero.
double em1_over(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x + x * x / 6.0;
    return -std::expm1(-x) / x;
}

// (1 - e^{-x}(1 + x)) / x^2, stable near zero; tends to 1/2.
double g2(double x) {
    if (std::abs(x) < 1e-4) return 0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0;
    return (1.0 - std::exp(-x) * (1.0 + x)) / (x * x);
}

// int_u^v y e^{-theta y} dy via the shifted stable forms.
double exp_weighted_segment_mean(double u, double v, double theta) {
    const double w = v - u;
    if (theta <= 0.0) return 0.5 * (v * v - u * u);
    const double x = theta * w;
    return std::exp(-theta * u) * (u * w * em1_over(x) + w * w * g2(x));
}

}  // namespace

LevyMeasureSpec LevyMeasureSpec::compound_poisson_exponential(double lambda, double mu) {
    require_finite(lambda, "lambda");
    require_finite(mu, "mu");
    if (lambda <= 0.0) throw std::invalid_argument("claim arrival rate lambda must be positive");
    if (mu <= 0.0) throw std::invalid_argument("exponential claim rate mu must be positive");
    LevyMeasureSpec m;
    m.kind_ = ClaimKind::Exponential;
    m.lambda_ = lambda;
    m.p1_ = mu;
    return m;
}

LevyMeasureSpec LevyMeasureSpec::compound_poisson_gamma(double lambda, double shape,
                                                        double rate) {
    require_finite(lambda, "lambda");
    require_finite(shape, "shape");
    require_finite(rate, "rate");
    if (lambda <= 0.0) throw std::invalid_argument("claim arrival rate lambda must be positive");
    if (shape <= 0.0 || rate <= 0.0)
        throw std::invalid_argument("gamma claim shape and rate must be positive");
    LevyMeasureSpec m;
    m.kind_ = ClaimKind::Gamma;
    m.lambda_ = lambda;
    m.p1_ = shape;
    m.p2_ = rate;
    return m;
}

LevyMeasureSpec LevyMeasureSpec::compound_poisson_uniform(double lambda, double lo, double hi) {
    require_finite(lambda, "lambda");
    require_finite(lo, "lo");
    require_finite(hi, "hi");
    if (lambda <= 0.0) throw std::invalid_argument("claim arrival rate lambda must be positive");
    if (lo < 0.0 || !(hi > lo))
        throw std::invalid_argument("uniform claim support needs 0 <= lo < hi");
    LevyMeasureSpec m;
    m.kind_ = ClaimKind::Uniform;
    m.lambda_ = lambda;
    m.p1_ = lo;
    m.p2_ = hi;
    return m;
}

LevyMeasureSpec LevyMeasureSpec::tabulated(std::vector<double> abscissae,
                                           std::vector<double> tail_values) {
    if (abscissae.size() != tail_values.size() || abscissae.size() < 2)
        throw std::invalid_argument("tabulated tail needs matching vectors with >= 2 samples");
    if (abscissae.front() != 0.0)
        throw std::invalid_argument("tabulated tail must start at abscissa 0");
    for (size_t i = 0; i < abscissae.size(); ++i) {
        require_finite(abscissae[i], "tabulated abscissa");
        require_finite(tail_values[i], "tabulated tail value");
        if (tail_values[i] < 0.0)
            throw std::invalid_argument("tabulated tail values must be nonnegative");
        if (i > 0 && !(abscissae[i] > abscissae[i - 1]))
            throw std::invalid_argument("tabulated abscissae must increase strictly");
        if (i > 0 && tail_values[i] > tail_values[i - 1])
            throw std::invalid_argument("tabulated tail values must be nonincreasing");
    }
    if (tail_values.back() != 0.0)
        throw std::invalid_argument("tabulated tail must end at 0 (finite support)");
    if (tail_values.front() <= 0.0)
        throw std::invalid_argument("tabulated tail must be positive at 0");

    LevyMeasureSpec m;
    m.kind_ = ClaimKind::Tabulated;
    m.ty_ = std::move(abscissae);
    m.tn_ = std::move(tail_values);
    const size_t n = m.ty_.size();
    m.tslope_.resize(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
        m.tslope_[i] = (m.tn_[i] - m.tn_[i + 1]) / (m.ty_[i + 1] - m.ty_[i]);
    // Suffix integrals of the piecewise-linear tail (exact trapezoids).
    m.tint_.assign(n, 0.0);
    for (size_t i = n - 1; i-- > 0;)
        m.tint_[i] = m.tint_[i + 1] +
                     0.5 * (m.tn_[i] + m.tn_[i + 1]) * (m.ty_[i + 1] - m.ty_[i]);
    return m;
}

double LevyMeasureSpec::lambda_total() const {
    return kind_ == ClaimKind::Tabulated ? tn_.front() : lambda_;
}

double LevyMeasureSpec::density(double y) const {
    switch (kind_) {
        case ClaimKind::Exponential:
            return y < 0.0 ? 0.0 : lambda_ * p1_ * std::exp(-p1_ * y);
        case ClaimKind::Gamma: {
            if (y < 0.0) return 0.0;
            if (y == 0.0) {
                if (p1_ > 1.0) return 0.0;
                if (p1_ == 1.0) return lambda_ * p2_;
                return std::numeric_limits<double>::infinity();
            }
            return lambda_ * std::exp(p1_ * std::log(p2_) + (p1_ - 1.0) * std::log(y) -
                                      p2_ * y - std::lgamma(p1_));
        }
        case ClaimKind::Uniform:
            return (y >= p1_ && y < p2_) ? lambda_ / (p2_ - p1_) : 0.0;
        case ClaimKind::Tabulated: {
            if (y < 0.0 || y >= ty_.back()) return 0.0;
            const auto it = std::upper_bound(ty_.begin(), ty_.end(), y);
            return tslope_[static_cast<size_t>(it - ty_.begin()) - 1];
        }
    }
    return 0.0;
}

double LevyMeasureSpec::tail(double y) const {
    if (y < 0.0) y = 0.0;
    switch (kind_) {
        case ClaimKind::Exponential:
            return lambda_ * std::exp(-p1_ * y);
        case ClaimKind::Gamma:
            return lambda_ * gamma_q(p1_, p2_ * y);
        case ClaimKind::Uniform:
            if (y <= p1_) return lambda_;
            if (y >= p2_) return 0.0;
            return lambda_ * (p2_ - y) / (p2_ - p1_);
        case ClaimKind::Tabulated: {
            if (y >= ty_.back()) return 0.0;
            const auto it = std::upper_bound(ty_.begin(), ty_.end(), y);
            const size_t i = static_cast<size_t>(it - ty_.begin()) - 1;
            return tn_[i] - tslope_[i] * (y - ty_[i]);
        }
    }
    return 0.0;
}

double LevyMeasureSpec::integrated_tail(double y) const {
    if (y < 0.0) y = 0.0;
    switch (kind_) {
        case ClaimKind::Exponential:
            return lambda_ * std::exp(-p1_ * y) / p1_;
        case ClaimKind::Gamma:
            // int_y^inf lambda Q(k, r s) ds = lambda [ (k/r) Q(k+1, r y) - y Q(k, r y) ].
            return lambda_ * ((p1_ / p2_) * gamma_q(p1_ + 1.0, p2_ * y) -
                              y * gamma_q(p1_, p2_ * y));
        case ClaimKind::Uniform:
            if (y >= p2_) return 0.0;
            if (y > p1_) return 0.5 * lambda_ * (p2_ - y) * (p2_ - y) / (p2_ - p1_);
            return lambda_ * (p1_ - y) + 0.5 * lambda_ * (p2_ - p1_);
        case ClaimKind::Tabulated: {
            if (y >= ty_.back()) return 0.0;
            const auto it = std::upper_bound(ty_.begin(), ty_.end(), y);
            const size_t i = static_cast<size_t>(it - ty_.begin()) - 1;
            const double ny = tn_[i] - tslope_[i] * (y - ty_[i]);
            return tint_[i + 1] + 0.5 * (ny + tn_[i + 1]) * (ty_[i + 1] - y);
        }
    }
    return 0.0;
}

double LevyMeasureSpec::tilted_tail(double y, double theta) const {
    if (theta < 0.0) throw std::domain_error("tilted_tail: theta must be nonnegative");
    if (theta == 0.0) return tail(y);
    if (y < 0.0) y = 0.0;
    switch (kind_) {
        case ClaimKind::Exponential:
            return lambda_ * p1_ / (p1_ + theta) * std::exp(-(p1_ + theta) * y);
        case ClaimKind::Gamma:
            return lambda_ * std::pow(p2_ / (p2_ + theta), p1_) *
                   gamma_q(p1_, (p2_ + theta) * y);
        case ClaimKind::Uniform: {
            const double lo = std::max(y, p1_);
            if (lo >= p2_) return 0.0;
            const double dens = lambda_ / (p2_ - p1_);
            const double w = p2_ - lo;
            return dens * std::exp(-theta * lo) * w * em1_over(theta * w);
        }
        case ClaimKind::Tabulated: {
            if (y >= ty_.back()) return 0.0;
            double acc = 0.0;
            for (size_t i = 0; i + 1 < ty_.size(); ++i) {
                const double u = std::max(y, ty_[i]);
                const double v = ty_[i + 1];
                if (v <= u || tslope_[i] == 0.0) continue;
                const double w = v - u;
                acc += tslope_[i] * std::exp(-theta * u) * w * em1_over(theta * w);
            }
            return acc;
        }
    }
    return 0.0;
}

double LevyMeasureSpec::tilted_mean(double theta) const {
    if (theta < 0.0) throw std::domain_error("tilted_mean: theta must be nonnegative");
    switch (kind_) {
        case ClaimKind::Exponential:
            return lambda_ * p1_ / ((p1_ + theta) * (p1_ + theta));
        case ClaimKind::Gamma:
            return lambda_ * p1_ / p2_ * std::pow(p2_ / (p2_ + theta), p1_ + 1.0);
        case ClaimKind::Uniform:
            return lambda_ / (p2_ - p1_) * exp_weighted_segment_mean(p1_, p2_, theta);
        case ClaimKind::Tabulated: {
            double acc = 0.0;
            for (size_t i = 0; i + 1 < ty_.size(); ++i)
                if (tslope_[i] != 0.0)
                    acc += tslope_[i] *
                           exp_weighted_segment_mean(ty_[i], ty_[i + 1], theta);
            return acc;
        }
    }
    return 0.0;
}

double LevyMeasureSpec::mean() const { return tilted_mean(0.0); }

double LevyMeasureSpec::second_moment() const {
    switch (kind_) {
        case ClaimKind::Exponential:
            return 2.0 * lambda_ / (p1_ * p1_);
        case ClaimKind::Gamma:
            return lambda_ * p1_ * (p1_ + 1.0) / (p2_ * p2_);
        case ClaimKind::Uniform:
            return lambda_ * (p2_ * p2_ + p1_ * p2_ + p1_ * p1_) / 3.0;
        case ClaimKind::Tabulated: {
            double acc = 0.0;
            for (size_t i = 0; i + 1 < ty_.size(); ++i)
                acc += tslope_[i] *
                       (std::pow(ty_[i + 1], 3) - std::pow(ty_[i], 3)) / 3.0;
            return acc;
        }
    }
    return 0.0;
}

double LevyMeasureSpec::psi_jump(double alpha) const {
    if (alpha > 0.0) throw std::domain_error("psi_jump: alpha must be nonpositive");
    if (alpha == 0.0) return 0.0;
    switch (kind_) {
        case ClaimKind::Exponential:
            return lambda_ * alpha / (p1_ - alpha);
        case ClaimKind::Gamma:
            return lambda_ * (std::pow(p2_ / (p2_ - alpha), p1_) - 1.0);
        case ClaimKind::Uniform: {
            if (std::abs(alpha) < 1e-8) return alpha * mean();
            const double w = p2_ - p1_;
            return lambda_ * (std::exp(alpha * p1_) * std::expm1(alpha * w) / (alpha * w) - 1.0);
        }
        case ClaimKind::Tabulated: {
            if (std::abs(alpha) < 1e-8) return alpha * mean();
            double acc = 0.0;
            for (size_t i = 0; i + 1 < ty_.size(); ++i) {
                if (tslope_[i] == 0.0) continue;
                const double w = ty_[i + 1] - ty_[i];
                acc += tslope_[i] * w *
                       (std::exp(alpha * ty_[i]) * std::expm1(alpha * w) / (alpha * w) - 1.0);
            }
            return acc;
        }
    }
    return 0.0;
}

double LevyMeasureSpec::exp_mu() const {
    if (kind_ != ClaimKind::Exponential) throw std::logic_error("not an exponential claim kind");
    return p1_;
}
double LevyMeasureSpec::gamma_shape() const {
    if (kind_ != ClaimKind::Gamma) throw std::logic_error("not a gamma claim kind");
    return p1_;
}
double LevyMeasureSpec::gamma_rate() const {
    if (kind_ != ClaimKind::Gamma) throw std::logic_error("not a gamma claim kind");
    return p2_;
}
double LevyMeasureSpec::uniform_lo() const {
    if (kind_ != ClaimKind::Uniform) throw std::logic_error("not a uniform claim kind");
    return p1_;
}
double LevyMeasureSpec::uniform_hi() const {
    if (kind_ != ClaimKind::Uniform) throw std::logic_error("not a uniform claim kind");
    return p2_;
}

LevyModel::LevyModel(double premium_rate, double volatility, LevyMeasureSpec m)
    : c(premium_rate), sigma(volatility), measure(std::move(m)) {
    require_finite(c, "premium rate");
    require_finite(sigma, "volatility");
    if (c <= 0.0) throw std::invalid_argument("premium rate must be positive");
    if (sigma < 0.0) throw std::invalid_argument("volatility must be nonnegative");
    if (!(measure.mean() < c))
        throw std::invalid_argument(
            "net profit condition violated: mean claim outflow must stay below the premium rate");
}

double psi_subordinator(const LevyModel& model, double alpha) {
    return model.measure.psi_jump(alpha);
}

double psi(const LevyModel& model, double beta) {
    if (beta < 0.0) throw std::domain_error("psi: beta must be nonnegative");
    return model.c * beta + model.measure.psi_jump(-beta) +
           0.5 * model.sigma * model.sigma * beta * beta;
}

double phi_inverse(const LevyModel& model, double q) {
    if (q < 0.0) throw std::domain_error("phi_inverse: q must be nonnegative");
    if (q == 0.0) return 0.0;  // net profit forces the largest root of psi = 0 to be 0
    double hi = 1.0;
    int guard = 0;
    while (psi(model, hi) < q) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("phi_inverse: bracket failed to expand");
    }
    // psi is convex, vanishes at 0 and has positive slope there, so it is
    // strictly increasing on [0, inf) and plain bisection suffices.
    return bisect_increasing([&](double b) { return psi(model, b); }, 0.0, hi, q);
}

double rho(const LevyModel& model) { return model.measure.mean() / model.c; }

GridSpec default_grid(const LevyModel& model, double q, double x, Eigen::Index cells) {
    (void)q;
    const double mean_claim = model.measure.mean() / model.measure.lambda_total();
    const double x_max = std::max({4.0 * x, 40.0 * mean_claim, 20.0});
    return GridSpec(x_max, cells);
}

}  // namespace ruinkit
