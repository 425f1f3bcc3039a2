#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ffsim {

/// Structure-of-arrays view of the static predictors feeding the decision
/// model. All pointers address n contiguous doubles.
struct PredictorArrays {
    const double* sex;
    const double* age;
    const double* env;
    const double* exp;
    const double* wca;
    const double* know;
    const double* trust;
    const double* access;
    const double* freq;
};

/// Batched forms of the per-agent arithmetic. Every backend must be
/// bit-identical to the scalar reference: same operation order, no fused
/// multiply-add, libm exp on every lane. The engine treats the choice as a
/// pure speed knob.
struct BatchKernels {
    const char* name;

    /// out[i] = decision-model score of agent i, clamped to the probability
    /// bounds. Matches purchase_probability() exactly.
    void (*purchase_prob)(const PredictorArrays& in, double* out, std::size_t n);

    /// out[i] = sm_feedback(x[i], s_sm[i], beta).
    void (*sm_feedback)(const double* x, const double* s_sm, double beta,
                        double* out, std::size_t n);

    /// out[i] = blend(prior[i], promoted[i], s[i], gamma). In-place use
    /// (out == prior) is allowed.
    void (*blend)(const double* prior, const double* promoted, const double* s,
                  double gamma, double* out, std::size_t n);

    /// x[i] *= factor (campaign fatigue over a susceptibility array).
    void (*scale)(double* x, double factor, std::size_t n);
};

const BatchKernels& scalar_batch();

/// AVX2 backend, or nullptr when the binary was built without AVX2 support
/// or the CPU lacks it.
const BatchKernels* avx2_batch();

/// Resolves "scalar", "avx2" or "auto" (preferring AVX2 when available).
/// Returns nullptr for unknown names or an unavailable explicit request.
const BatchKernels* select_batch(std::string_view name);

/// Backend names usable with select_batch on this machine.
std::vector<std::string> available_backends();

} // namespace ffsim
