#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruinkit/edvci.hpp"

#include <cmath>
#include <stdexcept>

#include "ruinkit/scale.hpp"
#include "ruinkit/tilt.hpp"

using namespace ruinkit;

namespace {

LevyModel m1() { return LevyModel(1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }
LevyModel m2() { return LevyModel(1.5, 1.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }

// Independently frozen roots of psi = q for m2 (12+ digits).
constexpr double kPhiM2Q05 = 0.472833908995256;
constexpr double kPhiM2Q1 = 0.761557181831890;

// Exp(mu) claims give e^{-mu x} lambda / (mu + phi) for the discounted tail
// and the same over mu for the discounted integrated tail.
double exp_tail_form(double x, double lam, double mu, double phi) {
    return lam * std::exp(-mu * x) / (mu + phi);
}

}  // namespace

TEST_CASE("discounted claim tails match the exponential closed forms") {
    // Power-of-two cell width keeps the probe points on grid nodes, where the
    // per-cell quadrature is exact to ~1e-9; between nodes the samples are
    // chorded linearly.
    GridSpec spec(32.0, 2048);
    const auto t1 = t_func(m1(), 1.0, spec);
    const auto h1 = h_func(m1(), 1.0, spec);
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0, 9.0}) {
        CHECK(t1.value_at(x) == doctest::Approx(exp_tail_form(x, 1.0, 1.0, 1.0)).epsilon(1e-8));
        CHECK(h1.value_at(x) == doctest::Approx(exp_tail_form(x, 1.0, 1.0, 1.0)).epsilon(1e-8));
    }
    CHECK(t1.value_at(0.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(h1.value_at(0.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(t1.value_at(0.7) == doctest::Approx(exp_tail_form(0.7, 1.0, 1.0, 1.0)).epsilon(2e-4));

    const auto t2 = t_func(m2(), 0.5, spec);
    const auto h2 = h_func(m2(), 0.5, spec);
    for (double x : {0.0, 1.0, 4.0}) {
        CHECK(t2.value_at(x) ==
              doctest::Approx(exp_tail_form(x, 1.0, 1.0, kPhiM2Q05)).epsilon(1e-8));
        CHECK(h2.value_at(x) ==
              doctest::Approx(exp_tail_form(x, 1.0, 1.0, kPhiM2Q05)).epsilon(1e-8));
    }
}

TEST_CASE("discounted tails for gamma claims match direct integration") {
    // Gamma(shape 2, rate 2) claims: tail e^{-2s}(1+2s), integrated tail
    // e^{-2v}(1+v); both discounted integrals then close in elementary terms.
    const LevyModel m(2.0, 0.5, LevyMeasureSpec::compound_poisson_gamma(1.0, 2.0, 2.0));
    const double q = 0.5;
    const double phi = phi_inverse(m, q);
    GridSpec spec(32.0, 2048);  // probe points fall on nodes
    const auto t = t_func(m, q, spec);
    const auto h = h_func(m, q, spec);
    const double p2 = phi + 2.0;
    for (double x : {0.0, 0.5, 1.5, 4.0}) {
        const double tx = std::exp(-2.0 * x) * ((1.0 + 2.0 * x) / p2 + 2.0 / (p2 * p2));
        const double hx = std::exp(-2.0 * x) * ((1.0 + x) / p2 + 1.0 / (p2 * p2));
        CHECK(t.value_at(x) == doctest::Approx(tx).epsilon(1e-7));
        CHECK(h.value_at(x) == doctest::Approx(hx).epsilon(1e-7));
    }
}

TEST_CASE("vanishing claim mass sends the tails to zero") {
    const LevyModel tiny(1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1e-6, 1.0));
    GridSpec spec(40.0, 256);
    CHECK(h_func(tiny, 1.0, spec).value_at(0.0) < 1e-6);
    CHECK(t_func(tiny, 1.0, spec).value_at(0.0) < 1e-6);
}

TEST_CASE("ruin transform and discounted deficit at zero surplus") {
    GridSpec spec(40.0, 2048);
    // Drift-only: the scale density atom 1/c carries the whole value at x = 0.
    CHECK(kappa(m1(), 1.0, 0.0, spec) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(varphi(m1(), 1.0, 0.0, spec) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    // With diffusion the barrier is hit immediately from 0, at zero deficit, so
    // the exact value is 1.  The numeric value probes the boundary layer of the
    // ladder-height density (width sigma^2 / (2 c_tilde)), which the
    // mass-preserving cell averaging resolves only to first order in the cell
    // width; expect ~2% at 2048 cells, halving when the grid is refined.
    const double at2048 = kappa(m2(), 1.0, 0.0, spec);
    CHECK(at2048 == doctest::Approx(1.0).epsilon(2.5e-2));
    const double at4096 = kappa(m2(), 1.0, 0.0, GridSpec(40.0, 4096));
    CHECK(std::abs(at4096 - 1.0) < 0.6 * std::abs(at2048 - 1.0));
    CHECK(varphi(m2(), 1.0, 0.0, spec) == 0.0);
}

TEST_CASE("ruin transform reduces to the ruin probability when q is zero") {
    GridSpec spec(40.0, 4096);
    CHECK(kappa(m1(), 0.0, 1.0, spec) == doctest::Approx(0.477687540383).epsilon(2e-3));
    // Perturbed model: compare against the independent compound-geometric path.
    const auto s = pk_survival(tilt_model(m2(), 0.0), spec);
    for (double x : {0.5, 1.0, 2.0})
        CHECK(kappa(m2(), 0.0, x, spec) ==
              doctest::Approx(1.0 - s.cdf.value_at(x)).epsilon(2e-3));
}

TEST_CASE("record factors match the drift-only reductions") {
    for (double q : {0.25, 0.5, 1.0, 2.0, 5.0}) {
        const double phi = phi_inverse(m1(), q);
        CHECK(xi(m1(), q) == doctest::Approx(1.0 - q / (1.5 * phi)).epsilon(1e-12));
        CHECK(delta(m1(), q) ==
              doctest::Approx((q - 0.5 * phi) / (1.5 * phi * phi)).epsilon(1e-12));
    }
    CHECK(xi(m1(), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(delta(m1(), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("record factors at the frozen perturbed roots") {
    CHECK(xi(m2(), 1.0) == doctest::Approx(0.301832208955).epsilon(1e-9));
    CHECK(delta(m2(), 1.0) == doctest::Approx(0.382073501156).epsilon(1e-9));
    // Spot checks straight from the formulas at the frozen root.
    const double denom = kPhiM2Q1 * (3.0 + kPhiM2Q1);
    CHECK(xi(m2(), 1.0) == doctest::Approx(1.0 - 2.0 / denom).epsilon(1e-10));
    CHECK(delta(m2(), 1.0) ==
          doctest::Approx(3.0 / denom * (2.0 / denom - 1.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("record factors have the right undiscounted limits") {
    // q = 0 returns documented limit values, continuous from q > 0.
    CHECK(xi(m1(), 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(xi(m2(), 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(delta(m1(), 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(delta(m2(), 0.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(xi(m2(), 1e-4) == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(delta(m2(), 1e-4) == doctest::Approx(8.0 / 9.0).epsilon(2e-3));
    CHECK(xi(m1(), 1e6) < 1e-4);
    CHECK_THROWS_AS((void)xi(m1(), -0.5), std::domain_error);
    CHECK_THROWS_AS((void)delta(m1(), -0.5), std::domain_error);
}

TEST_CASE("record injection sizes stay nonnegative across discount rates") {
    for (double q : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(delta(m1(), q) >= 0.0);
        CHECK(delta(m2(), q) >= 0.0);
        CHECK(xi(m1(), q) > 0.0);
        CHECK(xi(m1(), q) < 1.0);
        CHECK(xi(m2(), q) > 0.0);
        CHECK(xi(m2(), q) < 1.0);
    }
}

TEST_CASE("injection value assembles its parts exactly") {
    GridSpec spec(40.0, 2048);
    const auto r = edvci_value(m1(), 1.0, 0.0, spec);
    CHECK(r.varphi == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(r.kappa == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(r.xi == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.delta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.value == r.varphi + r.delta / (1.0 - r.xi) * r.kappa);
    REQUIRE(r.classical_value.has_value());
    CHECK(std::abs(*r.classical_value - r.value) <= 1e-10);

    const auto p = edvci_value(m2(), 1.0, 1.0, spec);
    CHECK(!p.classical_value.has_value());
    CHECK(p.value >= p.varphi);
    CHECK(p.value == p.varphi + p.delta / (1.0 - p.xi) * p.kappa);
}

TEST_CASE("injection value decreases in surplus and in discounting") {
    GridSpec spec(40.0, 2048);
    double prev = 1e300;
    for (double x : {0.0, 0.5, 1.0, 2.0}) {
        const double v = edvci_value(m2(), 1.0, x, spec).value;
        CHECK(v < prev);
        CHECK(v >= 0.0);
        prev = v;
    }
    CHECK(edvci_value(m2(), 1.0, 20.0, spec).value < 1e-3);
    prev = 1e300;
    for (double q : {0.5, 1.0, 2.0}) {
        const double v = edvci_value(m2(), q, 1.0, spec).value;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("tiny diffusion stays within one percent of the drift-only value") {
    GridSpec spec(40.0, 4096);
    const LevyModel near_m1(1.5, 1e-3, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0));
    const double vp = edvci_value(near_m1, 1.0, 1.0, spec).value;
    const double v0 = edvci_value(m1(), 1.0, 1.0, spec).value;
    CHECK(vp == doctest::Approx(v0).epsilon(1e-2));
}

TEST_CASE("undiscounted injection totals are rejected") {
    GridSpec spec(40.0, 256);
    CHECK_THROWS_AS((void)edvci_value(m1(), 5e-5, 1.0, spec), std::domain_error);
    CHECK_THROWS_AS((void)edvci_value(m1(), 1.0, -1.0, spec), std::domain_error);
}
