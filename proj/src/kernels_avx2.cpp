// AVX2 variants of the batch kernels. Built with -mavx2 on x86-64; the
// dispatch layer never hands them out unless the CPU supports AVX2.
//
// Bit-identity with the scalar reference is a hard requirement, so each
// kernel mirrors the scalar operation sequence step for step: separate
// multiply and add (the whole project builds with -ffp-contract=off), the
// same clamp order, and std::exp evaluated per lane rather than a vector
// approximation.

#include "kernels_impl.hpp"

#if defined(__AVX2__)

#include "ffsim/model.hpp"

#include <cmath>
#include <immintrin.h>

namespace ffsim {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline __m256d exp_lanes(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    t[0] = std::exp(t[0]);
    t[1] = std::exp(t[1]);
    t[2] = std::exp(t[2]);
    t[3] = std::exp(t[3]);
    return _mm256_load_pd(t);
}

void purchase_prob_avx2(const PredictorArrays& in, double* out, std::size_t n) {
    const __m256d lo = _mm256_set1_pd(kProbFloor);
    const __m256d hi = _mm256_set1_pd(kProbCeil);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_set1_pd(kDecisionCoef[0]);
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[1]),
                                           _mm256_loadu_pd(in.sex + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[2]),
                                           _mm256_loadu_pd(in.age + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[3]),
                                           _mm256_loadu_pd(in.env + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[4]),
                                           _mm256_loadu_pd(in.exp + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[5]),
                                           _mm256_loadu_pd(in.wca + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[6]),
                                           _mm256_loadu_pd(in.know + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[7]),
                                           _mm256_loadu_pd(in.trust + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[8]),
                                           _mm256_loadu_pd(in.access + i)));
        p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(kDecisionCoef[9]),
                                           _mm256_loadu_pd(in.freq + i)));
        p = _mm256_min_pd(_mm256_max_pd(p, lo), hi);
        _mm256_storeu_pd(out + i, p);
    }
    if (i < n) {
        PredictorArrays tail = {in.sex + i,   in.age + i,  in.env + i,
                                in.exp + i,   in.wca + i,  in.know + i,
                                in.trust + i, in.access + i, in.freq + i};
        scalar_batch().purchase_prob(tail, out + i, n - i);
    }
}

void sm_feedback_avx2(const double* x, const double* s_sm, double beta,
                      double* out, std::size_t n) {
    const __m256d betav = _mm256_set1_pd(beta);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d cap_hi = _mm256_set1_pd(0.95);
    const __m256d cap_lo = _mm256_set1_pd(0.05);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d b = _mm256_mul_pd(_mm256_set1_pd(50.0), _mm256_loadu_pd(s_sm + i));
        __m256d x2 = _mm256_mul_pd(xv, xv);
        // b*x2*x - 1.5*b*x2 + 0.75*b*x + (0.5 - 0.125*b) + beta, evaluated
        // left to right exactly as the scalar expression groups it.
        __m256d raw = _mm256_mul_pd(_mm256_mul_pd(b, x2), xv);
        raw = _mm256_sub_pd(raw, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(1.5), b), x2));
        raw = _mm256_add_pd(raw, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(0.75), b), xv));
        raw = _mm256_add_pd(raw, _mm256_sub_pd(_mm256_set1_pd(0.5),
                                               _mm256_mul_pd(_mm256_set1_pd(0.125), b)));
        raw = _mm256_add_pd(raw, betav);
        __m256d over = _mm256_cmp_pd(raw, one, _CMP_GT_OQ);
        raw = _mm256_blendv_pd(raw, cap_hi, over);
        __m256d under = _mm256_cmp_pd(raw, zero, _CMP_LT_OQ);
        raw = _mm256_blendv_pd(raw, cap_lo, under);
        _mm256_storeu_pd(out + i, raw);
    }
    if (i < n) {
        scalar_batch().sm_feedback(x + i, s_sm + i, beta, out + i, n - i);
    }
}

void blend_avx2(const double* prior, const double* promoted, const double* s,
                double gamma, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d gammav = _mm256_set1_pd(gamma);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d pr = _mm256_loadu_pd(prior + i);
        __m256d pm = _mm256_loadu_pd(promoted + i);
        __m256d sv = _mm256_loadu_pd(s + i);
        __m256d d = _mm256_sub_pd(pm, pr);
        __m256d oms = _mm256_sub_pd(one, sv);
        // At s == 1 the reciprocal is +inf, min() falls back to gamma, and
        // the final select below returns promoted for those lanes anyway.
        __m256d geff = _mm256_min_pd(_mm256_div_pd(one, oms), gammav);
        __m256d e = _mm256_mul_pd(_mm256_mul_pd(geff, oms), abs_pd(d));
        __m256d w = exp_lanes(_mm256_sub_pd(zero, e));
        __m256d res = _mm256_add_pd(pr, _mm256_mul_pd(_mm256_mul_pd(sv, d), w));
        res = _mm256_min_pd(_mm256_max_pd(res, zero), one);
        __m256d sat = _mm256_cmp_pd(sv, one, _CMP_EQ_OQ);
        res = _mm256_blendv_pd(res, pm, sat);
        _mm256_storeu_pd(out + i, res);
    }
    if (i < n) {
        scalar_batch().blend(prior + i, promoted + i, s + i, gamma, out + i, n - i);
    }
}

void scale_avx2(double* x, double factor, std::size_t n) {
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), f));
    }
    if (i < n) {
        scalar_batch().scale(x + i, factor, n - i);
    }
}

} // namespace

const BatchKernels* avx2_batch_impl() {
    static const BatchKernels k = {
        "avx2",
        purchase_prob_avx2,
        sm_feedback_avx2,
        blend_avx2,
        scale_avx2,
    };
    return &k;
}

} // namespace ffsim

#else // !__AVX2__

namespace ffsim {

const BatchKernels* avx2_batch_impl() { return nullptr; }

} // namespace ffsim

#endif
