#pragma once

#include <cmath>
#include <cstdint>

namespace scalespace {

/// Deterministic counter-style generator (splitmix64 output function over an
/// incrementing Weyl state) with Box-Muller normals on top. Every random
/// quantity in the library flows through one of these, seeded explicitly, so
/// identical seeds give bit-identical streams within a build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller; the paired deviate is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Gamma(shape, rate) draw, Marsaglia-Tsang squeeze; shape < 1 handled by
    /// the boost gamma(shape+1) * U^(1/shape).
    double gamma(double shape, double rate) {
        if (shape < 1.0) {
            double u = uniform();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = gaussian();
            double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            double v = t * t * t;
            double u = uniform();
            double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    /// InvGamma(shape, b) with density proportional to x^(-shape-1) exp(-b/x),
    /// i.e. the reciprocal of a Gamma(shape, rate = b) draw.
    double inverse_gamma(double shape, double b) { return 1.0 / gamma(shape, b); }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace scalespace
