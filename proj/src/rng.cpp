#include "ruinkit/rng.hpp"

#include <cmath>

namespace ruinkit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t a = mix64(seed + kGolden);
    std::uint64_t b = mix64(stream + 0xD1B54A32D192ED03ull);
    key_ = mix64(a ^ (b + kGolden + (a << 6) + (a >> 2)));
}

std::uint64_t PathRng::next_u64() { return mix64(key_ + (++ctr_) * kGolden); }

double PathRng::u01() {
    // 53-bit mantissa, offset by half an ulp: strictly inside (0, 1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::uniform(double a, double b) { return a + (b - a) * u01(); }

double PathRng::exponential(double rate) { return -std::log(u01()) / rate; }

double PathRng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = u01();
    double u2 = u01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
}

double PathRng::normal(double mean, double sd) { return mean + sd * normal(); }

double PathRng::gamma(double shape, double rate) {
    if (shape < 1.0) {
        double u = u01();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = u01();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v / rate;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

}  // namespace ruinkit
