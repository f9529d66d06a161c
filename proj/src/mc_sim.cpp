#include "ruinkit/mc_sim.hpp"

#include "ruinkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ruinkit {

namespace {

double norm_sf(double z) { return 0.5 * std::erfc(z / 1.4142135623730951); }

// P(sup_{s <= t} (omega s + sigma W_s) >= g) for a barrier g >= 0.
double hit_prob(double g, double omega, double sigma, double t) {
    const double sd = sigma * std::sqrt(t);
    const double direct = norm_sf((g - omega * t) / sd);
    const double reflected = std::exp(2.0 * omega * g / (sigma * sigma)) *
                             norm_sf((g + omega * t) / sd);
    return std::min(1.0, direct + reflected);
}

// Endpoint displacement over dt conditioned on the path staying below g:
// normal proposals thinned by the bridge no-crossing probability.
double no_hit_endpoint(PathRng& rng, double g, double omega, double sigma, double dt) {
    const double mean = omega * dt;
    const double sd = sigma * std::sqrt(dt);
    const double rate = 2.0 * g / (sigma * sigma * dt);
    for (long it = 0; it < 20000000; ++it) {
        const double d = mean + sd * rng.normal();
        if (d >= g) continue;
        if (rng.u01() < 1.0 - std::exp(-rate * (g - d))) return d;
    }
    throw std::runtime_error("no-crossing endpoint sampler failed to accept");
}

// Maximum displacement over an interval with endpoints pinned at 0 and d,
// inverse-transform sampled from the bridge maximum law.
double bridge_max(PathRng& rng, double d, double sigma, double dt) {
    const double v = rng.u01();
    return 0.5 * (d + std::sqrt(d * d - 2.0 * sigma * sigma * dt * std::log(v)));
}

double sample_claim(const LevyMeasureSpec& m, PathRng& rng) {
    switch (m.kind()) {
        case ClaimKind::Exponential:
            return rng.exponential(m.exp_mu());
        case ClaimKind::Gamma:
            return rng.gamma(m.gamma_shape(), m.gamma_rate());
        case ClaimKind::Uniform:
            return rng.uniform(m.uniform_lo(), m.uniform_hi());
        case ClaimKind::Tabulated:
            break;
    }
    throw std::invalid_argument("path simulation needs a parametric claim law; "
                                "tabulated tails have no sampler");
}

// Walks the record chain from (t0, level) with the running maximum seeded at
// level; visit(time, level_before, level_after) returns false to stop.
template <class Visit>
void walk_records(const LevyModel& model, PathRng& rng, double t0, double level, double horizon,
                  PathScheme scheme, double substep, Visit&& visit) {
    const double lam = model.measure.lambda_total();
    double t = t0;
    double y = level;
    double ybar = level;
    double last = level;
    for (;;) {
        const double dt = rng.exponential(lam);
        if (t + dt > horizon) return;  // records ride on claims, none left in range
        if (model.sigma > 0.0) {
            if (scheme == PathScheme::Bridge) {
                const double d = rng.normal(-model.c * dt, model.sigma * std::sqrt(dt));
                ybar = std::max(ybar, y + bridge_max(rng, d, model.sigma, dt));
                y += d;
            } else {
                const long n = std::max<long>(1, std::lround(std::ceil(dt / substep)));
                const double h = dt / static_cast<double>(n);
                const double sq = model.sigma * std::sqrt(h);
                for (long i = 0; i < n; ++i) {
                    y += -model.c * h + sq * rng.normal();
                    ybar = std::max(ybar, y);
                }
            }
        } else {
            y -= model.c * dt;
        }
        t += dt;
        const double ynew = y + sample_claim(model.measure, rng);
        if (ynew > ybar) {
            const bool keep_going = visit(t, last, ynew);
            last = ynew;
            ybar = ynew;
            y = ynew;
            if (!keep_going) return;
        } else {
            y = ynew;
        }
    }
}

struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Chunked mean/standard error; chunk partial sums are combined in path-index
// order so the result is independent of any future scheduling of the chunks.
template <class PathValue>
Estimate run_mc(const LevyModel& model, const SimConfig& cfg, PathValue&& per_path) {
    cfg.validate(model);
    const double hor = cfg.horizon();
    constexpr std::int64_t kChunk = 4096;
    Kahan total, total_sq;
    for (std::int64_t base = 0; base < cfg.paths; base += kChunk) {
        const std::int64_t stop = std::min(cfg.paths, base + kChunk);
        Kahan part, part_sq;
        for (std::int64_t i = base; i < stop; ++i) {
            PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
            const double v = per_path(rng, hor);
            part.add(v);
            part_sq.add(v * v);
        }
        total.add(part.sum);
        total_sq.add(part_sq.sum);
    }
    const double n = static_cast<double>(cfg.paths);
    const double mean = total.sum / n;
    double var = total_sq.sum / n - mean * mean;
    if (cfg.paths > 1) var *= n / (n - 1.0);
    Estimate e;
    e.value = mean;
    e.std_error = std::sqrt(std::max(0.0, var) / n);
    e.paths = cfg.paths;
    return e;
}

double edpf_path_value(const LevyModel& model, const PenaltySpec& pen, const SimConfig& cfg,
                       PathRng& rng, double hor) {
    const RuinOutcome ro = simulate_to_ruin(model, cfg.x, hor, rng, cfg.scheme, cfg.substep);
    if (!ro.ruined) return 0.0;
    double val = std::exp(-cfg.q * ro.tau) * pen.first(ro.surplus_prior, ro.deficit);
    int record = 2;  // the first post-ruin record
    if (pen.follow_up(record) == nullptr) return val;
    walk_records(model, rng, ro.tau, cfg.x + ro.deficit, hor, cfg.scheme, cfg.substep,
                 [&](double tn, double before, double after) {
                     val += std::exp(-cfg.q * tn) * (*pen.follow_up(record))(before, after);
                     ++record;
                     return pen.follow_up(record) != nullptr;
                 });
    return val;
}

}  // namespace

double SimConfig::horizon() const {
    if (t_max > 0.0) return t_max;
    if (q > 0.0) return std::log(1e6) / q;
    throw std::invalid_argument("SimConfig: a t_max horizon is required when q = 0");
}

void SimConfig::validate(const LevyModel& model) const {
    if (paths < 1) throw std::invalid_argument("SimConfig: paths must be >= 1");
    if (q < 0.0) throw std::invalid_argument("SimConfig: q must be >= 0");
    if (x < 0.0) throw std::invalid_argument("SimConfig: x must be >= 0");
    if (t_max < 0.0) throw std::invalid_argument("SimConfig: t_max must be >= 0");
    if (scheme == PathScheme::Substep && !(substep > 0.0))
        throw std::invalid_argument("SimConfig: substep must be positive");
    if (model.measure.kind() == ClaimKind::Tabulated)
        throw std::invalid_argument("path simulation needs a parametric claim law; "
                                    "tabulated tails have no sampler");
    horizon();  // q = 0 without t_max is unusable
}

RuinOutcome simulate_to_ruin(const LevyModel& model, double x, double horizon, PathRng& rng,
                             PathScheme scheme, double substep) {
    if (x < 0.0) throw std::invalid_argument("simulate_to_ruin: x must be >= 0");
    RuinOutcome out;
    const double lam = model.measure.lambda_total();
    double t = 0.0;
    double y = 0.0;
    for (;;) {
        const double dt = rng.exponential(lam);
        if (model.sigma > 0.0) {
            const double g = x - y;  // gap to the barrier, >= 0
            if (scheme == PathScheme::Bridge) {
                const double p = hit_prob(g, -model.c, model.sigma, dt);
                // Forcing near-certain crossings caps the endpoint sampler's
                // rejection count; the law error is below 1e-6 per interval.
                const bool hit = (1.0 - p < 1e-6) || rng.u01() < p;
                if (hit) {
                    const double target = rng.u01() * p;
                    const double ts = bisect_increasing(
                        [&](double s) {
                            return s <= 0.0 ? 0.0 : hit_prob(g, -model.c, model.sigma, s);
                        },
                        0.0, dt, target);
                    if (t + ts > horizon) return out;
                    out.ruined = true;
                    out.tau = t + ts;
                    return out;  // creep: zero deficit
                }
                y += no_hit_endpoint(rng, g, -model.c, model.sigma, dt);
            } else {
                const long n = std::max<long>(1, std::lround(std::ceil(dt / substep)));
                const double h = dt / static_cast<double>(n);
                const double sq = model.sigma * std::sqrt(h);
                for (long i = 0; i < n; ++i) {
                    y += -model.c * h + sq * rng.normal();
                    if (y >= x) {
                        if (t + static_cast<double>(i + 1) * h > horizon) return out;
                        out.ruined = true;
                        out.tau = t + static_cast<double>(i + 1) * h;
                        // Step-end detection: project the state onto the
                        // barrier, as the exact crossing carries no deficit.
                        return out;
                    }
                }
            }
        } else {
            y -= model.c * dt;
        }
        t += dt;
        if (t > horizon) return out;
        const double ynew = y + sample_claim(model.measure, rng);
        if (ynew > x) {
            out.ruined = true;
            out.by_jump = true;
            out.tau = t;
            out.surplus_prior = x - y;
            out.deficit = ynew - x;
            return out;
        }
        y = ynew;
    }
}

std::vector<RecordEvent> collect_records(const LevyModel& model, PathRng& rng, double t0,
                                         double level, double horizon, int max_records,
                                         PathScheme scheme, double substep) {
    std::vector<RecordEvent> events;
    if (max_records <= 0) return events;
    walk_records(model, rng, t0, level, horizon, scheme, substep,
                 [&](double t, double before, double after) {
                     events.push_back({t, before, after});
                     return static_cast<int>(events.size()) < max_records;
                 });
    return events;
}

Estimate estimate(const LevyModel& model, EstimateTarget target, const SimConfig& cfg) {
    switch (target) {
        case EstimateTarget::RuinProbability:
            return run_mc(model, cfg, [&](PathRng& rng, double hor) {
                return simulate_to_ruin(model, cfg.x, hor, rng, cfg.scheme, cfg.substep).ruined
                           ? 1.0
                           : 0.0;
            });
        case EstimateTarget::Kappa:
            return run_mc(model, cfg, [&](PathRng& rng, double hor) {
                const RuinOutcome ro =
                    simulate_to_ruin(model, cfg.x, hor, rng, cfg.scheme, cfg.substep);
                return ro.ruined ? std::exp(-cfg.q * ro.tau) : 0.0;
            });
        case EstimateTarget::Varphi:
            return run_mc(model, cfg, [&](PathRng& rng, double hor) {
                const RuinOutcome ro =
                    simulate_to_ruin(model, cfg.x, hor, rng, cfg.scheme, cfg.substep);
                return ro.ruined ? std::exp(-cfg.q * ro.tau) * ro.deficit : 0.0;
            });
        case EstimateTarget::Xi:
        case EstimateTarget::Delta:
            return run_mc(model, cfg, [&](PathRng& rng, double hor) {
                double v = 0.0;
                walk_records(model, rng, 0.0, 0.0, hor, cfg.scheme, cfg.substep,
                             [&](double t, double, double after) {
                                 v = std::exp(-cfg.q * t) *
                                     (target == EstimateTarget::Xi ? 1.0 : after);
                                 return false;
                             });
                return v;
            });
        case EstimateTarget::Edvci: {
            PenaltySpec injections;
            injections.first = deficit_penalty();
            injections.subsequent = {increment_penalty()};
            injections.tail = PenaltyTail::RepeatLast;
            return estimate_edpf(model, injections, cfg);
        }
    }
    throw std::logic_error("estimate: unknown target");
}

Estimate estimate_n_probability(const LevyModel& model, int n, const SimConfig& cfg) {
    if (n < 0) throw std::invalid_argument("estimate_n_probability: n must be >= 0");
    return run_mc(model, cfg, [&](PathRng& rng, double hor) {
        const RuinOutcome ro = simulate_to_ruin(model, cfg.x, hor, rng, cfg.scheme, cfg.substep);
        if (!ro.ruined) return 0.0;
        int count = 0;
        walk_records(model, rng, ro.tau, cfg.x + ro.deficit, hor, cfg.scheme, cfg.substep,
                     [&](double, double, double) { return ++count <= n; });
        return count == n ? 1.0 : 0.0;
    });
}

Estimate estimate_edpf(const LevyModel& model, const PenaltySpec& penalty, const SimConfig& cfg) {
    if (!penalty.first) throw std::invalid_argument("estimate_edpf: missing first penalty");
    for (const auto& fn : penalty.subsequent)
        if (!fn) throw std::invalid_argument("estimate_edpf: empty follow-up penalty");
    return run_mc(model, cfg, [&](PathRng& rng, double hor) {
        return edpf_path_value(model, penalty, cfg, rng, hor);
    });
}

std::vector<std::int64_t> record_count_histogram(const LevyModel& model, int n_cap,
                                                 const SimConfig& cfg) {
    if (n_cap < 0) throw std::invalid_argument("record_count_histogram: n_cap must be >= 0");
    cfg.validate(model);
    const double hor = cfg.horizon();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_cap) + 2, 0);
    for (std::int64_t i = 0; i < cfg.paths; ++i) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
        const RuinOutcome ro = simulate_to_ruin(model, cfg.x, hor, rng, cfg.scheme, cfg.substep);
        if (!ro.ruined) continue;
        int count = 0;
        walk_records(model, rng, ro.tau, cfg.x + ro.deficit, hor, cfg.scheme, cfg.substep,
                     [&](double, double, double) { return ++count <= n_cap; });
        ++counts[static_cast<std::size_t>(std::min(count, n_cap + 1))];
    }
    return counts;
}

}  // namespace ruinkit
