#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ruinkit {

/// One verified claim about the library: analytic quantities against closed
/// forms, independent code paths against each other, and every estimator
/// against its Monte Carlo counterpart.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // deterministic; safe to compare byte for byte
};

struct ValidationReport {
    std::vector<CriterionResult> results;
    bool all_pass = false;
    std::string rendered;
};

/// Runs the full self-check battery (ten criteria, fixed tolerances, the two
/// reference models with and without diffusion). The final criterion repeats
/// the battery with the same seed and demands a byte-identical report, so
/// everything rendered here must be deterministic.
ValidationReport run_acceptance(std::uint64_t seed);

std::string render_report(const std::vector<CriterionResult>& results);

}  // namespace ruinkit
