#include "ffsim/kernels.hpp"

#include "ffsim/influence.hpp"
#include "ffsim/model.hpp"

#include <algorithm>

namespace ffsim {

namespace {

void purchase_prob_scalar(const PredictorArrays& in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double p = kDecisionCoef[0];
        p = p + kDecisionCoef[1] * in.sex[i];
        p = p + kDecisionCoef[2] * in.age[i];
        p = p + kDecisionCoef[3] * in.env[i];
        p = p + kDecisionCoef[4] * in.exp[i];
        p = p + kDecisionCoef[5] * in.wca[i];
        p = p + kDecisionCoef[6] * in.know[i];
        p = p + kDecisionCoef[7] * in.trust[i];
        p = p + kDecisionCoef[8] * in.access[i];
        p = p + kDecisionCoef[9] * in.freq[i];
        out[i] = std::min(std::max(p, kProbFloor), kProbCeil);
    }
}

void sm_feedback_scalar(const double* x, const double* s_sm, double beta,
                        double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = sm_feedback(x[i], s_sm[i], beta);
    }
}

void blend_scalar(const double* prior, const double* promoted, const double* s,
                  double gamma, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = blend(prior[i], promoted[i], s[i], gamma);
    }
}

void scale_scalar(double* x, double factor, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = x[i] * factor;
    }
}

} // namespace

const BatchKernels& scalar_batch() {
    static const BatchKernels k = {
        "scalar",
        purchase_prob_scalar,
        sm_feedback_scalar,
        blend_scalar,
        scale_scalar,
    };
    return k;
}

} // namespace ffsim
