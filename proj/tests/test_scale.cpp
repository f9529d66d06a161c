#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruinkit/scale.hpp"

#include <cmath>

using namespace ruinkit;

namespace {

LevyModel m1() { return LevyModel(1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }
LevyModel m2() { return LevyModel(1.5, 1.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }

// Drift-free survival closed form: 1 - rho e^{-(mu - lambda/c) x}.
double m1_survival(double x) { return 1.0 - (2.0 / 3.0) * std::exp(-x / 3.0); }

// Diffusion-perturbed survival closed form (two-exponential partial fractions,
// frozen from an independent symbolic computation).
double m2_survival(double x) {
    const double r1 = 0.267949192431123, r2 = 3.732050807568877;
    const double a1 = 0.211324865405187, a2 = 0.788675134594813;
    return a1 / r1 * (1.0 - std::exp(-r1 * x)) + a2 / r2 * (1.0 - std::exp(-r2 * x));
}

}  // namespace

TEST_CASE("compound-geometric survival matches the drift-free closed form") {
    GridSpec spec(40.0, 8192);
    const auto s = pk_survival(tilt_model(m1(), 0.0), spec);
    CHECK(s.cdf.value_at(0.0) == doctest::Approx(1.0 / 3.0).epsilon(2e-4));
    for (double x : {0.5, 1.0, 2.0, 5.0})
        CHECK(s.cdf.value_at(x) == doctest::Approx(m1_survival(x)).epsilon(2e-4));
    CHECK(!s.truncated);
    CHECK(s.series_tail_bound < 1e-12);
    CHECK(s.series_terms > 10);
}

TEST_CASE("compound-geometric survival matches the perturbed closed form") {
    GridSpec spec(40.0, 8192);
    const auto s = pk_survival(tilt_model(m2(), 0.0), spec);
    CHECK(s.cdf.value_at(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.cdf.atom0() == 0.0);
    for (double x : {0.5, 1.0, 2.0})
        CHECK(s.cdf.value_at(x) == doctest::Approx(m2_survival(x)).epsilon(2e-4));
}

TEST_CASE("survival is monotone in x and in the claim intensity") {
    GridSpec spec(40.0, 2048);
    const auto s = pk_survival(tilt_model(m2(), 0.0), spec);
    const auto& v = s.cdf.values();
    for (Eigen::Index i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1] - 1e-13);
    CHECK(v[v.size() - 1] <= 1.0 + 1e-9);

    const LevyModel busier(1.5, 1.0, LevyMeasureSpec::compound_poisson_exponential(1.2, 1.0));
    const auto sb = pk_survival(tilt_model(busier, 0.0), spec);
    for (double x : {0.5, 1.0, 3.0, 10.0})
        CHECK(sb.cdf.value_at(x) <= s.cdf.value_at(x) + 1e-12);
}

TEST_CASE("narrow windows set the truncation flag") {
    GridSpec spec(5.0, 1024);
    const auto s = pk_survival(tilt_model(m2(), 0.0), spec);
    CHECK(s.truncated);
    // Coarse grids lose convolution mass and trip the flag too; the deficit
    // shrinks like delta^2, so a finer grid over the same window clears it.
    GridSpec coarse(60.0, 2048);
    CHECK(pk_survival(tilt_model(m2(), 0.0), coarse).truncated);
    GridSpec wide(60.0, 8192);
    CHECK(!pk_survival(tilt_model(m2(), 0.0), wide).truncated);
}

TEST_CASE("tilted scale function reproduces the drift-free closed form") {
    GridSpec spec(40.0, 8192);
    const auto w = scale_function_tilted(tilt_model(m1(), 0.0), spec);
    CHECK(w.fn.atom0() == doctest::Approx(2.0 / 3.0).epsilon(2e-4));
    for (double x : {0.0, 0.5, 1.0, 2.0, 6.0})
        CHECK(w.fn.value_at(x) ==
              doctest::Approx(2.0 - (4.0 / 3.0) * std::exp(-x / 3.0)).epsilon(2e-4));
    // Long-range limit 1/(c (1 - rho)) = 2.
    CHECK(w.fn.values()[spec.cells] == doctest::Approx(2.0).epsilon(1e-3));

    const auto wp = scale_function_tilted(tilt_model(m2(), 0.0), spec);
    CHECK(wp.fn.atom0() == 0.0);
    CHECK(wp.fn.value_at(0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("q-scale function satisfies its Laplace-transform characterization") {
    for (const auto& m : {m1(), m2()}) {
        for (double q : {0.0, 0.5, 1.0}) {
            GridSpec spec(60.0, 8192);
            const TiltedModel t = tilt_model(m, q);
            const auto w = scale_function(m, q, spec);
            const double plateau = 1.0 / (t.c_tilde * (1.0 - t.rho_tilde));
            for (double lam : {t.phi_q + 0.5, t.phi_q + 1.0, t.phi_q + 2.0}) {
                // Trapezoid transform over the window plus the analytic
                // geometric tail of W beyond it.
                const Eigen::ArrayXd x = spec.abscissae();
                const Eigen::ArrayXd integrand = (-lam * x).exp() * w.fn.values();
                const double window = trapezoid(integrand, spec.delta());
                const double tail = std::exp(-(lam - t.phi_q) * spec.x_max) * plateau /
                                    (lam - t.phi_q);
                const double expect = 1.0 / (psi(m, lam) - q);
                CHECK(window + tail == doctest::Approx(expect).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("scale derivative factor: closed forms, atom, and positivity") {
    GridSpec spec(40.0, 8192);
    // Drift-free, q=0: atom 1/c and density (4/9)e^{-x/3}.
    const auto a = f1(m1(), 0.0, spec);
    CHECK(a.atom0() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (double x : {0.0, 0.5, 1.0, 3.0})
        CHECK(a.value_at(x) == doctest::Approx((4.0 / 9.0) * std::exp(-x / 3.0)).epsilon(2e-3));

    // Drift-free, q=1: tilted model is CP(1/2, Exp(2)) so the tilted scale
    // density is (2/9)e^{-5x/3} and the prefactor e^{x} gives (2/9)e^{-2x/3}.
    const auto b = f1(m1(), 1.0, spec);
    CHECK(b.atom0() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (double x : {0.0, 0.5, 1.0, 3.0})
        CHECK(b.value_at(x) == doctest::Approx((2.0 / 9.0) * std::exp(-2.0 * x / 3.0)).epsilon(2e-3));

    // Diffusion model: no atom, boundary slope 2/sigma^2.
    const auto c = f1(m2(), 0.0, spec);
    CHECK(c.atom0() == 0.0);
    CHECK(c.values()[0] == doctest::Approx(2.0).epsilon(5e-2));
    CHECK((c.values() >= 0.0).all());
}
