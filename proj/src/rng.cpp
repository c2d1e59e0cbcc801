#include "hazard/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hazard {

std::uint64_t Rng::stream_seed(std::uint64_t run_seed, std::uint64_t index) {
    // Two splitmix64 rounds decorrelate (seed, index) pairs.
    std::uint64_t s = run_seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (0x9e3779b97f4a7c15ull * (index + 1));
    return splitmix64(s);
}

Rng Rng::for_chain(std::uint64_t run_seed, std::uint64_t index) {
    return Rng(stream_seed(run_seed, index));
}

double Rng::normal() {
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double Rng::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw std::domain_error("Rng::gamma: nonpositive parameter");
    if (shape < 1.0) {
        // boost: X = Gamma(shape+1) * U^(1/shape)
        const double g = gamma(shape + 1.0, 1.0);
        const double u = uniform_pos();
        return g * std::pow(u, 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_pos();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

} // namespace hazard
