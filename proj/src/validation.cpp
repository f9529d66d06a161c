#include "ruinkit/validation.hpp"

#include "ruinkit/edpf.hpp"
#include "ruinkit/edvci.hpp"
#include "ruinkit/mc_sim.hpp"
#include "ruinkit/numeric.hpp"
#include "ruinkit/output.hpp"
#include "ruinkit/scale.hpp"
#include "ruinkit/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ruinkit {

namespace {

// Two reference models share the claim law Exp(1) at arrival rate 1 and
// premium rate 1.5 (loading 2/3); they differ only in the diffusion term.
// The drift-only model has closed forms for almost everything, the mixed one
// exercises the creep machinery.
struct Ctx {
    LevyModel drift{1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)};
    LevyModel mixed{1.5, 1.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)};
    GridSpec grid{40.0, 4096};
    std::uint64_t seed = 1;
};

std::string fmt(double v) { return format_number(v); }

SimConfig mc(const Ctx& ctx, double q, double x, std::int64_t paths, double t_max = 0.0) {
    SimConfig cfg;
    cfg.seed = ctx.seed;
    cfg.paths = paths;
    cfg.q = q;
    cfg.x = x;
    cfg.t_max = t_max;
    return cfg;
}

double drift_ruin(double x) { return (2.0 / 3.0) * std::exp(-x / 3.0); }

CriterionResult c1_roots(const Ctx& ctx) {
    const double tol = 1e-10;
    double worst = std::abs(phi_inverse(ctx.drift, 1.0) - 1.0);  // exact root at 1
    for (const LevyModel* m : {&ctx.drift, &ctx.mixed})
        for (double q : {0.5, 1.0})
            worst = std::max(worst, std::abs(psi(*m, phi_inverse(*m, q)) - q));
    return {1, "laplace-exponent roots", worst < tol,
            "worst root residual " + fmt(worst) + " (tol 1e-10)"};
}

CriterionResult c2_scale_transform(const Ctx& ctx) {
    const double tol = 1e-3;
    double worst = 0.0;
    int count = 0;
    for (const LevyModel* m : {&ctx.drift, &ctx.mixed}) {
        for (double q : {0.0, 0.5, 1.0}) {
            const ScaleResult W = scale_function(*m, q, ctx.grid);
            const double phi = phi_inverse(*m, q);
            for (double shift : {0.5, 1.0, 2.0}) {
                const double lam = phi + shift;
                const double d = ctx.grid.delta();
                double integral = 0.0;
                double prev = W.fn.value_at(0.0);
                for (Eigen::Index i = 1; i <= ctx.grid.cells; ++i) {
                    const double y = d * static_cast<double>(i);
                    const double cur = std::exp(-lam * y) * W.fn.value_at(y);
                    integral += 0.5 * d * (prev + cur);
                    prev = cur;
                }
                const double target = 1.0 / (psi(*m, lam) - q);
                worst = std::max(worst, std::abs(integral - target) / target);
                ++count;
            }
        }
    }
    return {2, "scale-transform identity", worst < tol,
            "worst relative gap " + fmt(worst) + " over " + std::to_string(count) +
                " transforms (tol 0.001)"};
}

CriterionResult c3_drift_ruin(const Ctx& ctx) {
    const SurvivalResult surv = pk_survival(tilt_model(ctx.drift, 0.0), ctx.grid);
    double worst_formula = 0.0;
    double worst_sim = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
        const double reference = drift_ruin(x);
        worst_formula =
            std::max(worst_formula, std::abs((1.0 - surv.cdf.value_at(x)) - reference));
        const Estimate est =
            estimate(ctx.drift, EstimateTarget::RuinProbability, mc(ctx, 0.0, x, 100000, 200.0));
        worst_sim = std::max(worst_sim, std::abs(est.value - reference) / est.std_error);
    }
    const bool pass = worst_formula < 1e-4 && worst_sim <= 3.0;
    return {3, "drift-only ruin law", pass,
            "closed-form gap " + fmt(worst_formula) + " (tol 0.0001); simulation gap " +
                fmt(worst_sim) + " standard errors (tol 3)"};
}

CriterionResult c4_record_factors(const Ctx& ctx) {
    const double q = 1.0;
    // Drift-only values are exactly 1/3; the mixed ones are the closed formula
    // evaluated at the root, pinned here to twelve digits.
    double worst_formula = std::abs(xi(ctx.drift, q) - 1.0 / 3.0);
    worst_formula = std::max(worst_formula, std::abs(delta(ctx.drift, q) - 1.0 / 3.0));
    worst_formula = std::max(worst_formula, std::abs(xi(ctx.mixed, q) - 0.301832208955));
    worst_formula = std::max(worst_formula, std::abs(delta(ctx.mixed, q) - 0.382073501156));
    double worst_sim = 0.0;
    for (const LevyModel* m : {&ctx.drift, &ctx.mixed}) {
        const Estimate exi = estimate(*m, EstimateTarget::Xi, mc(ctx, q, 0.0, 100000));
        worst_sim = std::max(worst_sim, std::abs(exi.value - xi(*m, q)) / exi.std_error);
        const Estimate edl = estimate(*m, EstimateTarget::Delta, mc(ctx, q, 0.0, 100000));
        worst_sim = std::max(worst_sim, std::abs(edl.value - delta(*m, q)) / edl.std_error);
    }
    const bool pass = worst_formula < 1e-9 && worst_sim <= 3.0;
    return {4, "record discount and size factors", pass,
            "worst formula gap " + fmt(worst_formula) + " (tol 1e-09); simulation gap " +
                fmt(worst_sim) + " standard errors (tol 3)"};
}

CriterionResult c5_injection_values(const Ctx& ctx) {
    // Zero-surplus anchor: value is exactly 1/2 at q = 1 for the drift model.
    const double anchor = edvci_value(ctx.drift, 1.0, 0.0, ctx.grid).value;
    const double anchor_gap = std::abs(anchor - 0.5);
    const Estimate anchor_est =
        estimate(ctx.drift, EstimateTarget::Edvci, mc(ctx, 1.0, 0.0, 100000));
    const double anchor_sim = std::abs(anchor_est.value - 0.5) / anchor_est.std_error;

    bool grid_ok = true;
    double worst_ratio = 0.0;  // gap over its own allowance, max over the grid
    for (const LevyModel* m : {&ctx.drift, &ctx.mixed}) {
        for (double q : {0.5, 1.0}) {
            for (double x : {0.5, 1.0}) {
                const double analytic = edvci_value(*m, q, x, ctx.grid).value;
                const Estimate est = estimate(*m, EstimateTarget::Edvci, mc(ctx, q, x, 100000));
                const double allowance = std::max(3.0 * est.std_error, 0.02 * std::abs(analytic));
                const double ratio = std::abs(est.value - analytic) / allowance;
                worst_ratio = std::max(worst_ratio, ratio);
                grid_ok = grid_ok && ratio <= 1.0;
            }
        }
    }
    const bool pass = anchor_gap < 1e-6 && anchor_sim <= 3.0 && grid_ok;
    return {5, "injection values against simulation", pass,
            "anchor gap " + fmt(anchor_gap) + " (tol 1e-06), anchor simulation gap " +
                fmt(anchor_sim) + " standard errors (tol 3); worst grid gap " + fmt(worst_ratio) +
                " of its allowance (max of 3 standard errors and 2%)"};
}

CriterionResult c6_vanishing_diffusion(const Ctx& ctx) {
    const LevyModel faint(1.5, 1e-3, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0));
    double worst_pair = 0.0;   // record-cascade value vs classical reduction, sigma = 0
    double worst_faint = 0.0;  // sigma = 1e-3 value vs the sigma = 0 classical value
    for (double q : {0.5, 1.0}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const EdvciReport r = edvci_value(ctx.drift, q, x, ctx.grid);
            const double classical = r.classical_value.value();
            worst_pair = std::max(worst_pair, std::abs(r.value - classical) / classical);
            const double faint_value = edvci_value(faint, q, x, ctx.grid).value;
            worst_faint = std::max(worst_faint, std::abs(faint_value - classical) / classical);
        }
    }
    const bool pass = worst_pair < 1e-10 && worst_faint < 0.01;
    return {6, "vanishing-diffusion reduction", pass,
            "two-path relative gap " + fmt(worst_pair) + " (tol 1e-10); sigma = 0.001 drifts " +
                fmt(worst_faint) + " from the classical value (tol 0.01)"};
}

CriterionResult c7_record_count_law(const Ctx& ctx) {
    const int n_cap = 6;
    const SimConfig cfg = mc(ctx, 0.0, 1.0, 100000, 200.0);
    const std::vector<std::int64_t> counts = record_count_histogram(ctx.drift, n_cap, cfg);
    const double ruined =
        static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
    const double r = tilt_model(ctx.drift, 0.0).rho_tilde;  // geometric ratio, 2/3 here
    double chi2 = 0.0;
    for (int k = 0; k <= n_cap; ++k) {
        const double expected = ruined * (1.0 - r) * std::pow(r, k);
        const double gap = static_cast<double>(counts[k]) - expected;
        chi2 += gap * gap / expected;
    }
    const double tail_expected = ruined * std::pow(r, n_cap + 1);
    const double tail_gap = static_cast<double>(counts[n_cap + 1]) - tail_expected;
    chi2 += tail_gap * tail_gap / tail_expected;
    // 8 cells, 7 degrees of freedom.
    const double p = gamma_q(3.5, chi2 / 2.0);
    return {7, "record-count distribution", p > 0.01,
            "chi-squared " + fmt(chi2) + " on 7 degrees of freedom, p = " + fmt(p) +
                " (needs p > 0.01)"};
}

CriterionResult c8_capped_cascade(const Ctx& ctx) {
    PenaltySpec penalty;
    penalty.first = capped_deficit_penalty(2.0);
    penalty.subsequent = {capped_increment_penalty(2.0)};
    penalty.tail = PenaltyTail::RepeatLast;
    penalty.bound = 2.0;
    const ExtendedEdpfResult series = extended_edpf(ctx.mixed, 0.5, 1.0, penalty, ctx.grid);
    const Estimate est = estimate_edpf(ctx.mixed, penalty, mc(ctx, 0.5, 1.0, 100000));
    const double gap = std::abs(est.value - series.value) / est.std_error;
    const bool pass = gap <= 3.0 && series.series_tail_bound < 1e-9;
    return {8, "capped penalty cascade", pass,
            "series value " + fmt(series.value) + " (" + std::to_string(series.series_terms) +
                " terms, truncation bound " + fmt(series.series_tail_bound) +
                "), simulation gap " + fmt(gap) + " standard errors (tol 3)"};
}

CriterionResult c9_penalty_paths(const Ctx& ctx) {
    const auto w = deficit_penalty();
    const double q = 0.5;
    double worst = 0.0;
    for (const LevyModel* m : {&ctx.drift, &ctx.mixed}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const double direct = classic_edpf(*m, q, x, w, ctx.grid);
            const double via_scale = edpf_scale_form(*m, q, x, w, ctx.grid);
            worst = std::max(worst, std::abs(direct - via_scale) / std::abs(direct));
        }
    }
    return {9, "penalty code paths agree", worst < 1e-3,
            "worst relative gap " + fmt(worst) + " over 6 evaluations (tol 0.001)"};
}

std::vector<CriterionResult> run_battery(std::uint64_t seed) {
    Ctx ctx;
    ctx.seed = seed;
    return {c1_roots(ctx),          c2_scale_transform(ctx), c3_drift_ruin(ctx),
            c4_record_factors(ctx), c5_injection_values(ctx), c6_vanishing_diffusion(ctx),
            c7_record_count_law(ctx), c8_capped_cascade(ctx), c9_penalty_paths(ctx)};
}

}  // namespace

std::string render_report(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    std::size_t passed = 0;
    for (const CriterionResult& r : results) {
        out << (r.pass ? "[PASS]" : "[FAIL]") << " C" << r.id << " " << r.name << ": "
            << r.detail << "\n";
        passed += r.pass ? 1 : 0;
    }
    out << "RESULT: " << (passed == results.size() ? "PASS" : "FAIL") << " " << passed << "/"
        << results.size() << "\n";
    return out.str();
}

ValidationReport run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> results = run_battery(seed);
    const std::vector<CriterionResult> rerun = run_battery(seed);
    const bool identical = render_report(results) == render_report(rerun);
    results.push_back(
        {10, "deterministic reporting", identical,
         identical ? "two full runs with seed " + std::to_string(seed) +
                         " rendered byte-identical reports"
                   : "reports differ between two runs with seed " + std::to_string(seed)});
    ValidationReport report;
    report.results = std::move(results);
    report.all_pass = std::all_of(report.results.begin(), report.results.end(),
                                  [](const CriterionResult& r) { return r.pass; });
    report.rendered = render_report(report.results);
    return report;
}

}  // namespace ruinkit
