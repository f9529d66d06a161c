#pragma once

#include "ruinkit/grid.hpp"

#include <vector>

namespace ruinkit {

enum class ClaimKind { Exponential, Gamma, Uniform, Tabulated };

/// Jump measure of the aggregate-claims subordinator. Parametric kinds carry
/// closed forms for every primitive; the tabulated kind interpolates its tail
/// samples piecewise-linearly (so its density is piecewise constant) and
/// integrates segments exactly.
class LevyMeasureSpec {
  public:
    static LevyMeasureSpec compound_poisson_exponential(double lambda, double mu);
    static LevyMeasureSpec compound_poisson_gamma(double lambda, double shape, double rate);
    static LevyMeasureSpec compound_poisson_uniform(double lambda, double lo, double hi);
    /// Tail samples tail_values[i] = nu((abscissae[i], inf)); abscissae must
    /// start at 0 and increase strictly; the last tail sample must be 0.
    static LevyMeasureSpec tabulated(std::vector<double> abscissae,
                                     std::vector<double> tail_values);

    ClaimKind kind() const { return kind_; }

    /// Total jump rate nu((0, inf)).
    double lambda_total() const;
    /// Jump density nu(dy)/dy.
    double density(double y) const;
    /// N(y) = nu((y, inf)).
    double tail(double y) const;
    /// I(y) = int_y^inf N(s) ds.
    double integrated_tail(double y) const;
    /// N_theta(y) = int_(y,inf) e^{-theta s} nu(ds); theta >= 0.
    double tilted_tail(double y, double theta) const;
    /// int_0^inf y e^{-theta y} nu(dy); theta >= 0.
    double tilted_mean(double theta) const;
    /// E[S_1] = int y nu(dy).
    double mean() const;
    /// int y^2 nu(dy).
    double second_moment() const;
    /// int (e^{alpha y} - 1) nu(dy) for alpha <= 0.
    double psi_jump(double alpha) const;

    // Parametric parameters (throw unless the kind matches).
    double exp_mu() const;
    double gamma_shape() const;
    double gamma_rate() const;
    double uniform_lo() const;
    double uniform_hi() const;

  private:
    LevyMeasureSpec() = default;

    ClaimKind kind_ = ClaimKind::Exponential;
    double lambda_ = 0.0;  // parametric kinds only
    double p1_ = 0.0, p2_ = 0.0;
    // Tabulated data: knots, tail samples, per-segment density, suffix of
    // integrated tail at the knots.
    std::vector<double> ty_, tn_, tslope_, tint_;
};

/// Surplus driver: premium income at rate c, claims S_t, diffusion sigma B_t.
struct LevyModel {
    double c = 1.0;
    double sigma = 0.0;
    LevyMeasureSpec measure;

    LevyModel(double premium_rate, double volatility, LevyMeasureSpec m);
};

/// psi_S(alpha) = int (e^{alpha y} - 1) nu(dy), alpha <= 0.
double psi_subordinator(const LevyModel& model, double alpha);

/// Laplace exponent psi(beta) = c beta + psi_S(-beta) + sigma^2 beta^2 / 2, beta >= 0.
double psi(const LevyModel& model, double beta);

/// Largest root of psi(beta) = q; zero at q = 0, strictly positive for q > 0.
double phi_inverse(const LevyModel& model, double q);

/// Safety loading ratio E[S_1]/c, in (0, 1) for valid models.
double rho(const LevyModel& model);

/// Grid wide enough for the overshoot/scale computations at surplus x.
GridSpec default_grid(const LevyModel& model, double q, double x,
                      Eigen::Index cells = 4096);

}  // namespace ruinkit
