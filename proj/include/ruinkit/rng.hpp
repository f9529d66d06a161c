#pragma once

#include <cstdint>

namespace ruinkit {

/// Counter-based random stream for one simulation path.
///
/// The key is derived from (seed, stream); draw i is a splitmix64-style mix of
/// key + i * golden ratio, so the stream is a pure function of (seed, stream,
/// counter) and reproducible regardless of scheduling. All samplers are owned
/// here: reproducibility must not depend on standard-library distribution
/// internals.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double u01();
    double uniform(double a, double b);
    /// Exponential with the given rate.
    double exponential(double rate);
    /// Standard normal (Box-Muller, second value cached).
    double normal();
    double normal(double mean, double sd);
    /// Gamma(shape, rate), Marsaglia-Tsang with the boost for shape < 1.
    double gamma(double shape, double rate);

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace ruinkit
