#pragma once

#include <functional>
#include <vector>

#include "ruinkit/grid.hpp"
#include "ruinkit/levy_model.hpp"

namespace ruinkit {

enum class PenaltyTail { Zero, RepeatLast };

/// Penalty schedule for the discounted-penalty functionals: `first` charges
/// the ruin event as w(surplus_prior, deficit) with w(., 0) = 0 (a continuous
/// crossing costs nothing); `subsequent[k]` charges record k+2 as
/// F(level_before, level_after).  Past the explicit list the tail rule either
/// stops the schedule or repeats the last entry for every later record.
struct PenaltySpec {
    std::function<double(double, double)> first;
    std::vector<std::function<double(double, double)>> subsequent;
    PenaltyTail tail = PenaltyTail::Zero;
    double bound = 1.0;  // sup of every penalty over the window of interest

    /// Follow-up penalty charged at the record-th record (record >= 2), after
    /// applying the tail rule; nullptr when the schedule has ended.
    const std::function<double(double, double)>* follow_up(int record) const;

    /// Sampling checks on [0, span]^2: first(., 0) = 0, all values in [0, bound].
    void validate(double span) const;
};

/// Law of the level reached at ruin from surplus x, measured as the overshoot
/// beyond x; defective, total mass = probability of ruin under the tilted
/// measure.  The point mass at zero is the continuous-crossing contribution.
GridFunction ruin_overshoot_law(const LevyModel& model, double q, double x, const GridSpec& spec);

/// f2(v) = e^{Phi v} int_v^inf e^{-Phi s} [int_{y>s} w(s, y-s) nu(dy)] ds: the
/// penalty-weighted claim transform convolved with f1 in classic_edpf.
GridFunction f2(const LevyModel& model, double q, const std::function<double(double, double)>& w,
                const GridSpec& spec);

/// Expected discounted penalty at ruin: E[e^{-q tau_x} w(surplus_prior, deficit)],
/// computed as (f1 * f2)(x).
double classic_edpf(const LevyModel& model, double q, double x,
                    const std::function<double(double, double)>& w, const GridSpec& spec);

/// Same quantity through the scale-function double integral; independent code
/// path kept as a consistency check against classic_edpf.
double edpf_scale_form(const LevyModel& model, double q, double x,
                       const std::function<double(double, double)>& w, const GridSpec& spec);

/// Probability that exactly n more records follow the ruin epoch, jointly with
/// ruin from x (the geometric record law times the tilted ruin probability);
/// pass joint_with_ruin = false for the bare geometric weight.
double n_distribution(const LevyModel& model, double q, double x, int n, const GridSpec& spec,
                      bool joint_with_ruin = true);

struct ExtendedEdpfResult {
    double value = 0.0;        // classic part plus the record series
    double classic_part = 0.0;
    int series_terms = 0;          // record-series terms actually summed
    double series_tail_bound = 0;  // bound on everything truncated away
};

/// Discounted penalty extended over the whole record cascade: the classic
/// penalty at ruin plus one term per later record, each integrating the
/// follow-up penalty against the record-increment law and the law of the
/// running level.  The series is truncated once its remaining mass is provably
/// below 1e-10.
ExtendedEdpfResult extended_edpf(const LevyModel& model, double q, double x,
                                 const PenaltySpec& penalty, const GridSpec& spec);

/// Built-in penalty shapes shared by the command line driver and the tests.
std::function<double(double, double)> deficit_penalty();
std::function<double(double, double)> ruin_indicator_penalty();
std::function<double(double, double)> capped_deficit_penalty(double cap);
std::function<double(double, double)> increment_penalty();
std::function<double(double, double)> capped_increment_penalty(double cap);

}  // namespace ruinkit
