#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace ruinkit {

/// Compensated (Kahan) accumulator; order-stable summation building block.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

double norm_cdf(double z);
double norm_sf(double z);

/// Regularized incomplete gamma functions P(a,x) (lower) and Q(a,x) (upper).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_sf(double stat, int dof);

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth, int force) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    // `force` levels of mandatory bisection guard against features the first
    // coarse samples happen to miss (narrow peaks between sample points).
    if (depth <= 0 || (force <= 0 && std::abs(delta) <= 15.0 * tol))
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b]; tol is an absolute target.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48,
                        int min_depth = 8) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, min_depth);
}

///// Integral of a decaying integrand over [a, inf): the cutoff is pushed out by
/// doubling until the integrand falls below tiny * its largest seen value.
template <class F>
double integrate_decaying(F&& f, double a, double scale_hint, double tol, double tiny = 1e-14) {
    double step = scale_hint > 0.0 ? scale_hint : 1.0;
    double peak = std::abs(f(a));
    double cut = a + step;
    for (int i = 0; i < 64; ++i) {
        double v = std::abs(f(cut));
        peak = std::max(peak, v);
        if (v <= tiny * (peak > 0.0 ? peak : 1.0) && i >= 2) break;
        cut = a + (cut - a) * 2.0;
    }
    return adaptive_simpson(f, a, cut, tol);
}

/// Bisection for an increasing objective; returns the abscissa where f crosses target.
template <class F>
double bisect_increasing(F&& f, double lo, double hi, double target, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace ruinkit
