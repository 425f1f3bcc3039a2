#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ffsim {

/// Deterministic random source. Wraps std::mt19937_64 (fully specified by
/// the standard) and supplies hand-rolled distributions so that draw
/// sequences are reproducible bit-for-bit across platforms and compilers —
/// std::*_distribution makes no such guarantee.
///
/// Independent named substreams keep the simulation phases decoupled: a
/// phase that is disabled consumes nothing from the streams of the others.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Stream for `label` under `master_seed`. Distinct labels give
    /// statistically independent generators.
    static Rng substream(std::uint64_t master_seed, std::string_view label);

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be nonzero. Multiply-shift
    /// reduction; bias is O(n / 2^64), irrelevant at simulation sizes.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Standard normal via the Marsaglia polar method (no trig, keeps the
    /// draw sequence libm-light). The paired deviate is discarded.
    double normal();

    /// Gamma(shape, 1) via Marsaglia–Tsang; shapes below 1 are boosted with
    /// the standard power-of-uniform correction.
    double gamma(double shape);

    /// Beta(alpha, beta) as X / (X + Y) with independent gammas.
    double beta(double alpha, double beta);

private:
    std::mt19937_64 gen_;
};

/// 64-bit seed derivation helpers (SplitMix64 finalizer, FNV-1a hash).
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_label(std::string_view label);

} // namespace ffsim
