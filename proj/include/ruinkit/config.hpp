#pragma once

#include "ruinkit/edpf.hpp"
#include "ruinkit/levy_model.hpp"
#include "ruinkit/mc_sim.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ruinkit {

/// Settings for one command run, filled from the sectioned key = value dialect
/// (documented in the README, versioned by the mandatory top-level
/// `config_version = 1` line). Sections: [model], [grid], [query], [output].
/// Unknown or duplicate keys, malformed numbers, and missing required fields
/// are rejected with the offending line number.
struct ExperimentConfig {
    LevyModel model{1.5, 0.0, LevyMeasureSpec::compound_poisson_exponential(1.0, 1.0)};
    GridSpec grid{40.0, 4096};

    std::vector<double> q_values{0.5, 1.0};
    std::vector<double> x_values{0.5, 1.0, 2.0};
    std::string penalty = "deficit";
    std::string subsequent;  // empty: no follow-up charges
    std::string target = "ruin_probability";
    int n_records = 1;  // for target = n_probability
    std::int64_t paths = 100000;
    std::uint64_t seed = 1;
    double t_max = 0.0;
    std::string scheme = "bridge";  // bridge | substep
    double substep = 1e-3;

    std::string format = "csv";  // csv | json
    std::string out_path;        // empty: derived from the command name

    SimConfig sim(double q, double x) const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Resolves penalty names into a schedule. First charge: `deficit`,
/// `indicator`, or `capped_deficit:K`; follow-up charge: empty, `increment`,
/// or `capped_increment:K` (stationary, repeated at every later record). The
/// bound is the sup of the named shapes over the [0, span]^2 window.
PenaltySpec build_penalty(const std::string& first, const std::string& subsequent, double span);

/// Maps a target name (ruin_probability, kappa, varphi, xi, delta, edvci) to
/// the estimator tag; n_probability is handled separately by the front end.
EstimateTarget parse_target(const std::string& name);

}  // namespace ruinkit
