#pragma once

#include "ruinkit/edpf.hpp"
#include "ruinkit/levy_model.hpp"
#include "ruinkit/rng.hpp"

#include <cstdint>
#include <vector>

namespace ruinkit {

/// How the diffusion part is advanced between claim epochs. Bridge samples the
/// interval exactly in law (first-passage time against the barrier, endpoint
/// conditioned on no crossing, interval maximum from the bridge law); Substep
/// is a plain Euler walk at fixed step width, kept as an independent
/// cross-check with O(sqrt(step)) barrier bias.
enum class PathScheme { Bridge, Substep };

struct SimConfig {
    std::uint64_t seed = 1;
    std::int64_t paths = 100000;
    double q = 0.0;
    double x = 0.0;      // initial surplus; ignored by the record-factor targets
    double t_max = 0.0;  // explicit horizon; required when q == 0
    PathScheme scheme = PathScheme::Bridge;
    double substep = 1e-3;

    /// Effective simulation horizon: t_max when set, otherwise the time at
    /// which e^{-q t} decays to 1e-6. Throws when q == 0 and t_max is unset.
    double horizon() const;
    /// Throws std::invalid_argument on unusable settings, including claim laws
    /// without a sampler (tabulated tails).
    void validate(const LevyModel& model) const;
};

enum class EstimateTarget {
    RuinProbability,  // P(ruin by the horizon)
    Kappa,            // E[e^{-q tau}; ruin]
    Varphi,           // E[e^{-q tau} deficit; ruin]
    Xi,               // E[e^{-q T1}] for the first record from level 0 (x ignored)
    Delta,            // E[e^{-q T1} level(T1)] likewise
    Edvci,            // deficit at ruin plus every later record increment, discounted
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t paths = 0;
};

struct RuinOutcome {
    bool ruined = false;
    bool by_jump = false;        // false: the diffusion crept over the barrier
    double tau = 0.0;
    double surplus_prior = 0.0;  // surplus just before the ruin claim; 0 on creep
    double deficit = 0.0;        // shortfall at ruin; 0 on creep
};

/// One path of claims minus premium drift minus diffusion, run until it first
/// exceeds the surplus x or the horizon passes. x = 0 is allowed (immediate
/// crossing when a diffusion part is present).
RuinOutcome simulate_to_ruin(const LevyModel& model, double x, double horizon, PathRng& rng,
                             PathScheme scheme = PathScheme::Bridge, double substep = 1e-3);

struct RecordEvent {
    double time = 0.0;
    double level_before = 0.0;  // level at the previous record (or the start)
    double level_after = 0.0;   // level right after the record claim
};

/// Claim epochs at which the path exceeds its running maximum, collected from
/// the state (t0, level) with the running maximum seeded at level. The
/// level_after - level_before increments include any diffusion creep of the
/// maximum between the records.
std::vector<RecordEvent> collect_records(const LevyModel& model, PathRng& rng, double t0,
                                         double level, double horizon, int max_records,
                                         PathScheme scheme = PathScheme::Bridge,
                                         double substep = 1e-3);

/// Mean and standard error over cfg.paths independent paths. Streams are keyed
/// by (seed, path index) and partial sums are accumulated in fixed-size chunks
/// combined in index order, so results are bit-reproducible for a given
/// configuration.
Estimate estimate(const LevyModel& model, EstimateTarget target, const SimConfig& cfg);

/// P(ruin and exactly n records strictly after the ruin epoch).
Estimate estimate_n_probability(const LevyModel& model, int n, const SimConfig& cfg);

/// Path-simulation counterpart of extended_edpf for an arbitrary schedule:
/// charges first(surplus_prior, deficit) at ruin and the follow-up penalties
/// at the post-ruin records, all discounted at their event times.
Estimate estimate_edpf(const LevyModel& model, const PenaltySpec& penalty, const SimConfig& cfg);

/// counts[n] = ruined paths with exactly n post-ruin records, n <= n_cap;
/// counts[n_cap + 1] = ruined paths with more than n_cap.
std::vector<std::int64_t> record_count_histogram(const LevyModel& model, int n_cap,
                                                 const SimConfig& cfg);

}  // namespace ruinkit
