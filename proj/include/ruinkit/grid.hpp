#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ruinkit {

/// Uniform grid on [0, x_max] with `cells` intervals (cells + 1 nodes).
struct GridSpec {
    double x_max = 1.0;
    Eigen::Index cells = 4096;

    GridSpec() = default;
    GridSpec(double xmax, Eigen::Index n) : x_max(xmax), cells(n) {
        if (!(x_max > 0.0) || !std::isfinite(x_max))
            throw std::invalid_argument("GridSpec: x_max must be positive and finite");
        if (cells < 2) throw std::invalid_argument("GridSpec: need at least 2 cells");
    }

    double delta() const { return x_max / static_cast<double>(cells); }
    Eigen::Index nodes() const { return cells + 1; }
    Eigen::ArrayXd abscissae() const {
        return Eigen::ArrayXd::LinSpaced(nodes(), 0.0, x_max);
    }
    bool same_as(const GridSpec& o) const {
        return cells == o.cells && std::abs(x_max - o.x_max) <= 1e-12 * x_max;
    }
};

/// Nonnegative measure on [0, x_max]: a point mass at zero (atom0) plus a
/// density sampled at the grid nodes. Also reused as a plain sample container
/// for cumulative functions, where atom0 records the jump at zero that is
/// already included in values[0].
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(GridSpec spec, double atom0, Eigen::ArrayXd values)
        : spec_(spec), atom0_(atom0), values_(std::move(values)) {
        if (values_.size() != spec_.nodes())
            throw std::invalid_argument("GridFunction: sample count does not match grid");
    }

    static GridFunction zero(const GridSpec& spec) {
        return GridFunction(spec, 0.0, Eigen::ArrayXd::Zero(spec.nodes()));
    }
    static GridFunction dirac(const GridSpec& spec, double mass = 1.0) {
        return GridFunction(spec, mass, Eigen::ArrayXd::Zero(spec.nodes()));
    }
    static GridFunction from_density(const GridSpec& spec,
                                     const std::function<double(double)>& f) {
        Eigen::ArrayXd v(spec.nodes());
        const double d = spec.delta();
        for (Eigen::Index i = 0; i < spec.nodes(); ++i) v[i] = f(static_cast<double>(i) * d);
        return GridFunction(spec, 0.0, std::move(v));
    }

    const GridSpec& spec() const { return spec_; }
    double atom0() const { return atom0_; }
    double& atom0() { return atom0_; }
    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::ArrayXd& values() { return values_; }
    double delta() const { return spec_.delta(); }

    /// Density sample by linear interpolation; zero outside [0, x_max].
    double value_at(double x) const;

    /// atom0 + trapezoid integral of the density samples.
    double mass() const;

    /// Cumulative measure of [0, x] at each node; entry 0 equals atom0.
    Eigen::ArrayXd cumulative() const;

    GridFunction& scale(double a) {
        atom0_ *= a;
        values_ *= a;
        return *this;
    }
    /// this += a * g (same grid required).
    GridFunction& axpy(double a, const GridFunction& g);
    /// Rescale so that mass() == target.
    GridFunction& normalize_to(double target);

  private:
    GridSpec spec_{};
    double atom0_ = 0.0;
    Eigen::ArrayXd values_ = Eigen::ArrayXd::Zero(4097);
};

double trapezoid(const Eigen::ArrayXd& v, double delta);

/// Measure convolution on the shared grid: atoms multiply, each atom copies the
/// other density, and the continuous parts convolve by trapezoid quadrature.
/// Mass beyond x_max is truncated (never added).
GridFunction convolve(const GridFunction& f, const GridFunction& g);

struct SeriesResult {
    GridFunction value;
    int terms = 0;           // number of convolution powers actually added
    double tail_bound = 0.0; // geometric bound on the discarded tail mass
};

/// sum_{n >= 0} weight^n * (lead * base^{*n}), truncated at the first n whose
/// a-priori contribution bound weight^n mass(base)^n mass(lead) drops below
/// 1e-12. weight must lie in [0, 1).
SeriesResult geometric_convolution_series(const GridFunction& base, double weight,
                                          const GridFunction& lead);

}  // namespace ruinkit
