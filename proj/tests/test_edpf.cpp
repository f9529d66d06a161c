#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruinkit/edpf.hpp"

#include <cmath>
#include <stdexcept>

#include "ruinkit/edvci.hpp"
#include "ruinkit/scale.hpp"
#include "ruinkit/tilt.hpp"

using namespace ruinkit;

namespace {

LevyModel m1() { return LevyModel(1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }
LevyModel m2() { return LevyModel(1.5, 1.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)); }

// e^{phi x}-weighted total of a defective law on the overshoot axis (levels
// are x + grid abscissa), the discount-undoing companion of the ruin law.
double tilt_undone_mass(const GridFunction& g, double phi, double x) {
    const Eigen::ArrayXd w = g.values() * (phi * g.spec().abscissae()).exp();
    double s = trapezoid(w, g.spec().delta()) + g.atom0();
    return std::exp(phi * x) * s;
}

}  // namespace

TEST_CASE("ruin overshoot law carries the ruin mass") {
    GridSpec spec(40.0, 2048);
    // Drift-only, undiscounted: total mass is the classical ruin probability.
    const auto t1 = ruin_overshoot_law(m1(), 0.0, 1.0, spec);
    CHECK(t1.atom0() == 0.0);
    CHECK(t1.mass() == doctest::Approx(0.477687540383).epsilon(1e-3));

    // Perturbed, undiscounted: frozen two-exponential ruin probability.
    const auto t2 = ruin_overshoot_law(m2(), 0.0, 1.0, spec);
    CHECK(t2.atom0() > 0.0);  // continuous crossings carry point mass
    CHECK(t2.mass() == doctest::Approx(0.608354293642).epsilon(1e-3));

    // Discounted: mass must match the independent compound-geometric path.
    const auto t3 = ruin_overshoot_law(m2(), 1.0, 1.0, spec);
    const auto s = pk_survival(tilt_model(m2(), 1.0), spec);
    CHECK(t3.mass() == doctest::Approx(1.0 - s.cdf.value_at(1.0)).epsilon(1e-3));
    CHECK((t3.values() >= 0.0).all());

    CHECK_THROWS_AS((void)ruin_overshoot_law(m1(), 0.0, 0.0, spec), std::domain_error);
    CHECK_THROWS_AS((void)ruin_overshoot_law(m1(), 0.0, 50.0, spec), std::out_of_range);
}

TEST_CASE("overshoot law mass vanishes for large initial surplus") {
    GridSpec spec(60.0, 2048);
    CHECK(ruin_overshoot_law(m1(), 0.0, 30.0, spec).mass() < 1e-3);
}

TEST_CASE("overshoot law undoes the tilt into the ruin transform") {
    GridSpec spec(40.0, 2048);
    const auto a = ruin_overshoot_law(m1(), 1.0, 1.0, spec);
    CHECK(tilt_undone_mass(a, phi_inverse(m1(), 1.0), 1.0) ==
          doctest::Approx(kappa(m1(), 1.0, 1.0, spec)).epsilon(1e-3));
    const auto b = ruin_overshoot_law(m2(), 1.0, 1.0, spec);
    CHECK(tilt_undone_mass(b, phi_inverse(m2(), 1.0), 1.0) ==
          doctest::Approx(kappa(m2(), 1.0, 1.0, spec)).epsilon(1e-3));
}

TEST_CASE("penalty transform specializes to the discounted tails") {
    GridSpec spec(40.0, 2048);
    const auto fd = f2(m1(), 1.0, deficit_penalty(), spec);
    const auto h = h_func(m1(), 1.0, spec);
    const auto fi = f2(m1(), 1.0, ruin_indicator_penalty(), spec);
    const auto t = t_func(m1(), 1.0, spec);
    for (double x : {0.0, 0.3, 1.0, 2.7, 5.0, 9.0}) {
        CHECK(fd.value_at(x) == doctest::Approx(h.value_at(x)).epsilon(1e-8));
        CHECK(fi.value_at(x) == doctest::Approx(t.value_at(x)).epsilon(1e-8));
    }
    const auto gd = f2(m2(), 0.5, deficit_penalty(), spec);
    const auto h2 = h_func(m2(), 0.5, spec);
    for (double x : {0.0, 1.0, 4.0})
        CHECK(gd.value_at(x) == doctest::Approx(h2.value_at(x)).epsilon(1e-8));
}

TEST_CASE("zero penalties price to zero") {
    GridSpec spec(20.0, 512);
    auto zero = [](double, double) { return 0.0; };
    CHECK(f2(m1(), 1.0, zero, spec).mass() == 0.0);
    CHECK(classic_edpf(m1(), 1.0, 1.0, zero, spec) == 0.0);
    CHECK(edpf_scale_form(m1(), 1.0, 1.0, zero, spec) == 0.0);
}

TEST_CASE("classic penalty value at zero surplus from the point mass") {
    GridSpec spec(40.0, 2048);
    CHECK(classic_edpf(m1(), 1.0, 0.0, deficit_penalty(), spec) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("classic and scale-form penalty values agree") {
    GridSpec spec(40.0, 4096);
    for (double x : {0.5, 1.0, 2.0}) {
        const double a = classic_edpf(m1(), 1.0, x, deficit_penalty(), spec);
        const double b = edpf_scale_form(m1(), 1.0, x, deficit_penalty(), spec);
        CHECK(a > 0.0);
        CHECK(b == doctest::Approx(a).epsilon(1e-3));
    }
    for (double x : {0.5, 1.0, 2.0}) {
        const double a = classic_edpf(m2(), 0.5, x, deficit_penalty(), spec);
        const double b = edpf_scale_form(m2(), 0.5, x, deficit_penalty(), spec);
        CHECK(a > 0.0);
        CHECK(b == doctest::Approx(a).epsilon(1e-3));
    }
}

TEST_CASE("record-count law is geometric against the ruin mass") {
    GridSpec spec(40.0, 2048);
    double total = 0.0;
    for (int n = 0; n < 200; ++n) total += n_distribution(m1(), 0.0, 1.0, n, spec, false);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Joint with ruin: geometric weights scaled by the ruin probability.
    const double ruin = 0.477687540383;
    for (int n : {0, 1, 2, 4})
        CHECK(n_distribution(m1(), 0.0, 1.0, n, spec) ==
              doctest::Approx(ruin * (1.0 / 3.0) * std::pow(2.0 / 3.0, n)).epsilon(2e-3));

    // Heavy discounting leaves almost no mass beyond the first record.
    CHECK(n_distribution(m1(), 50.0, 1.0, 0, spec, false) > 0.999);
    CHECK_THROWS_AS((void)n_distribution(m1(), 0.0, 1.0, -1, spec), std::domain_error);
}

TEST_CASE("penalty schedules validate by sampling") {
    PenaltySpec ok;
    ok.first = deficit_penalty();
    ok.subsequent = {increment_penalty()};
    ok.tail = PenaltyTail::RepeatLast;
    ok.bound = 41.0;
    CHECK_NOTHROW(ok.validate(40.0));
    CHECK(ok.follow_up(2) == &ok.subsequent[0]);
    CHECK(ok.follow_up(7) == &ok.subsequent[0]);  // repeated past the list
    ok.tail = PenaltyTail::Zero;
    CHECK(ok.follow_up(3) == nullptr);

    PenaltySpec creepy;  // nonzero charge on a continuous crossing
    creepy.first = [](double, double) { return 1.0; };
    creepy.bound = 2.0;
    CHECK_THROWS_AS(creepy.validate(40.0), std::invalid_argument);

    PenaltySpec over;  // exceeds its declared bound
    over.first = deficit_penalty();
    over.bound = 1.0;
    CHECK_THROWS_AS(over.validate(40.0), std::invalid_argument);

    PenaltySpec negative;
    negative.first = [](double, double v) { return -v; };
    negative.bound = 1.0;
    CHECK_THROWS_AS(negative.validate(40.0), std::invalid_argument);
}

TEST_CASE("extended penalty with only a first charge is the classic value") {
    GridSpec spec(40.0, 2048);
    PenaltySpec p;
    p.first = deficit_penalty();
    p.bound = 41.0;
    const auto r = extended_edpf(m2(), 0.5, 1.0, p, spec);
    CHECK(r.value == r.classic_part);
    CHECK(r.series_terms == 0);
    CHECK(r.series_tail_bound == 0.0);
    CHECK(r.classic_part == classic_edpf(m2(), 0.5, 1.0, deficit_penalty(), spec));
}

TEST_CASE("stationary increment charges reproduce the injection value") {
    GridSpec spec(40.0, 4096);
    PenaltySpec p;
    p.first = deficit_penalty();
    p.subsequent = {increment_penalty()};
    p.tail = PenaltyTail::RepeatLast;
    p.bound = 41.0;
    const auto r = extended_edpf(m2(), 1.0, 1.0, p, spec);
    const auto v = edvci_value(m2(), 1.0, 1.0, spec);
    CHECK(r.classic_part == doctest::Approx(v.varphi).epsilon(1e-9));
    CHECK(r.value == doctest::Approx(v.value).epsilon(2e-3));
    CHECK(r.series_terms > 5);
    CHECK(r.series_tail_bound < 1e-10);
}

TEST_CASE("extended penalties grow with the follow-up schedule") {
    GridSpec spec(40.0, 2048);
    PenaltySpec half, full;
    half.first = full.first = deficit_penalty();
    half.subsequent = {[](double v, double u) { return 0.5 * (u - v); }};
    full.subsequent = {increment_penalty()};
    half.bound = full.bound = 41.0;
    const auto a = extended_edpf(m2(), 1.0, 1.0, half, spec);
    const auto b = extended_edpf(m2(), 1.0, 1.0, full, spec);
    CHECK(a.value > a.classic_part);
    CHECK(b.value > a.value);
    CHECK(a.value - a.classic_part == doctest::Approx(0.5 * (b.value - b.classic_part)).epsilon(1e-9));
}

TEST_CASE("capped schedules converge with a certified tail") {
    GridSpec spec(40.0, 2048);
    PenaltySpec p;
    p.first = capped_deficit_penalty(2.0);
    p.subsequent = {capped_increment_penalty(2.0)};
    p.tail = PenaltyTail::RepeatLast;
    p.bound = 2.0;
    const auto r = extended_edpf(m2(), 0.5, 1.0, p, spec);
    CHECK(r.value > r.classic_part);
    CHECK(r.value >= 0.0);
    CHECK(r.series_terms > 5);
    CHECK(r.series_tail_bound < 1e-10);
}
