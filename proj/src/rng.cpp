#include "ffsim/rng.hpp"

#include <cmath>

namespace ffsim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Rng Rng::substream(std::uint64_t master_seed, std::string_view label) {
    return Rng(mix64(master_seed ^ hash_label(label)));
}

double Rng::normal() {
    for (;;) {
        double u = 2.0 * next_double() - 1.0;
        double v = 2.0 * next_double() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        double u = 1.0 - next_double(); // (0, 1], keeps pow away from 0^inf
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) {
            continue;
        }
        double v = t * t * t;
        double u = next_double();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double Rng::beta(double alpha, double beta) {
    double x = gamma(alpha);
    double y = gamma(beta);
    return x / (x + y);
}

} // namespace ffsim
