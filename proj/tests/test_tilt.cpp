#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruinkit/tilt.hpp"

#include <cmath>

using namespace ruinkit;

namespace {

LevyModel m1() { return LevyModel(1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }
LevyModel m2() { return LevyModel(1.5, 1.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }
const double kPhiM2Q1 = 0.761557181831890;  // frozen bisection oracle

}  // namespace

TEST_CASE("tilting at q=0 changes nothing") {
    const auto t = tilt_model(m2(), 0.0);
    CHECK(t.phi_q == 0.0);
    CHECK(t.c_tilde == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(t.rho_tilde == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    for (double u : {0.0, 0.7, 2.0})
        CHECK(t.tilted_tail(u) == doctest::Approx(m2().measure.tail(u)).epsilon(1e-13));
}

TEST_CASE("tilted drift-free model has the closed-form reduced measure") {
    const auto t = tilt_model(m1(), 1.0);
    CHECK(t.phi_q == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.c_tilde == doctest::Approx(1.5).epsilon(1e-12));  // sigma = 0
    CHECK(t.rho_tilde == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    // Tilted measure: rate-1/2 arrivals of Exp(2) claims; tail 0.5 e^{-2u}.
    for (double u : {0.0, 0.5, 1.5})
        CHECK(t.tilted_tail(u) == doctest::Approx(0.5 * std::exp(-2.0 * u)).epsilon(1e-10));
}

TEST_CASE("tilting the diffusion model grows the drift and shrinks the loading") {
    const auto t = tilt_model(m2(), 1.0);
    CHECK(t.c_tilde == doctest::Approx(1.5 + kPhiM2Q1).epsilon(1e-10));
    const double expect_rho =
        1.0 / ((1.0 + kPhiM2Q1) * (1.0 + kPhiM2Q1)) / (1.5 + kPhiM2Q1);
    CHECK(t.rho_tilde == doctest::Approx(expect_rho).epsilon(1e-9));
    CHECK(t.c_tilde >= t.base.c);
    CHECK(t.rho_tilde > 0.0);
    CHECK(t.rho_tilde < 1.0);
    CHECK(t.rho_tilde <= rho(t.base));
    CHECK_THROWS_AS(tilt_model(m2(), -0.5), std::domain_error);
}

TEST_CASE("diffusion-part law is exponential with rate 2c/sigma^2") {
    GridSpec spec(20.0, 8192);
    const auto g = g_density(m2(), spec);
    CHECK(g.atom0() == 0.0);
    CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {0.05, 0.3, 1.0, 2.0})
        CHECK(g.value_at(x) == doctest::Approx(3.0 * std::exp(-3.0 * x)).epsilon(1e-3));

    const auto gt = g_density(tilt_model(m2(), 1.0), spec);
    const double rate = 2.0 * (1.5 + kPhiM2Q1);
    CHECK(gt.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gt.value_at(0.3) == doctest::Approx(rate * std::exp(-rate * 0.3)).epsilon(1e-3));
}

TEST_CASE("zero volatility collapses the diffusion law to the unit atom") {
    GridSpec spec(20.0, 1024);
    const auto g = g_density(m1(), spec);
    CHECK(g.atom0() == 1.0);
    CHECK(g.values().abs().maxCoeff() == 0.0);
}

TEST_CASE("unresolvably steep diffusion law collapses to the unit atom") {
    const LevyModel thin(1.5, 1e-3, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0));
    GridSpec spec(40.0, 4096);  // rate 3e6 versus delta ~ 1e-2
    const auto g = g_density(thin, spec);
    CHECK(g.atom0() == 1.0);
    CHECK(g.mass() == doctest::Approx(1.0));
}

TEST_CASE("ladder-height density is the claim tail over the drift") {
    GridSpec spec(40.0, 16384);
    const auto h = h_density(m1(), spec);
    CHECK(h.value_at(1.0) == doctest::Approx(std::exp(-1.0) / 1.5).epsilon(1e-6));
    CHECK(h.mass() == doctest::Approx(2.0 / 3.0).epsilon(1e-6));

    const auto ht = h_density(tilt_model(m1(), 1.0), spec);
    // Tilted: (1/c)(1/2)e^{-2u}; mass = rho_tilde = 1/6.
    CHECK(ht.value_at(0.5) == doctest::Approx(std::exp(-1.0) / 3.0).epsilon(1e-6));
    CHECK(ht.mass() == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
}

TEST_CASE("tilt at q=0 leaves the ladder-height density unchanged pointwise") {
    GridSpec spec(20.0, 2048);
    const auto a = h_density(m2(), spec);
    const auto b = h_density(tilt_model(m2(), 0.0), spec);
    CHECK((a.values() - b.values()).abs().maxCoeff() < 1e-10);
}

TEST_CASE("overshoot law at the first record epoch") {
    GridSpec spec(40.0, 16384);
    // sigma = 0: the diffusion factor is a Dirac, so the law equals h.
    const auto m1law = overshoot_law_at_tau(m1(), spec);
    const auto h1 = h_density(m1(), spec);
    CHECK(m1law.atom0() == 0.0);
    for (double u : {0.2, 1.0, 3.0})
        CHECK(m1law.value_at(u) == doctest::Approx(h1.value_at(u)).epsilon(1e-12));

    // Masses: rho untilted, rho_tilde tilted.
    const auto law0 = overshoot_law_at_tau(m2(), spec);
    CHECK(law0.mass() == doctest::Approx(2.0 / 3.0).epsilon(2e-5));
    const auto t = tilt_model(m2(), 1.0);
    const auto law1 = overshoot_law_at_tau(t, spec);
    CHECK(law1.mass() == doctest::Approx(t.rho_tilde).epsilon(2e-5));
}
