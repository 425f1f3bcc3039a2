#include "ffsim/influence.hpp"

#include <cmath>
#include <cstdio>

namespace ffsim {

namespace {

std::string range_error(const char* field, double value, double lo, double hi) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s = %g is outside the permitted range [%g, %g]",
                  field, value, lo, hi);
    return buf;
}

} // namespace

std::string validate_kernel_params(const KernelParams& p) {
    if (p.delta < 0.05 || p.delta > 0.5) {
        return range_error("delta", p.delta, 0.05, 0.5);
    }
    if (p.tau && (*p.tau < 0.05 || *p.tau > 0.5)) {
        return range_error("tau", *p.tau, 0.05, 0.5);
    }
    if (p.sigma < 0.05 || p.sigma > 0.5) {
        return range_error("sigma", p.sigma, 0.05, 0.5);
    }
    if (p.beta < -0.30 || p.beta > 0.30) {
        return range_error("beta", p.beta, -0.30, 0.30);
    }
    if (p.zeta && (*p.zeta < 0.5 || *p.zeta > 1.5)) {
        return range_error("zeta", *p.zeta, 0.5, 1.5);
    }
    if (p.gov_exposure_prob < 0.0 || p.gov_exposure_prob > 1.0) {
        return range_error("gov_exposure_prob", p.gov_exposure_prob, 0.0, 1.0);
    }
    if (p.blend_gamma < 0.0) {
        return "blend_gamma must be non-negative";
    }
    if (p.fatigue_rate < 0.0) {
        return "fatigue_rate must be non-negative";
    }
    return {};
}

double peer_update(double self_opinion, double s_pp_self,
                   std::span<const PeerTerm> peers, std::optional<double> tau) {
    double sum = 0.0;
    int k = 0;
    for (const PeerTerm& peer : peers) {
        if (!(peer.s_pp < s_pp_self)) {
            continue;
        }
        double op = peer.opinion;
        double be = peer.behavior;
        if (tau && std::abs(op - self_opinion) > *tau) {
            op = 1.0 - op;
            be = 1.0 - be;
        }
        sum = sum + (op * (1.0 / 3.0) + be * (2.0 / 3.0));
        ++k;
    }
    if (k == 0) {
        return self_opinion;
    }
    double mixed = (1.0 - s_pp_self) * self_opinion + (s_pp_self / k) * sum;
    return std::min(std::max(mixed, 0.0), 1.0);
}

double sm_feedback_raw(double opinion, double s_sm, double beta) {
    double b = 50.0 * s_sm;
    double x = opinion;
    double x2 = x * x;
    return b * x2 * x - 1.5 * b * x2 + 0.75 * b * x + (0.5 - 0.125 * b) + beta;
}

double sm_feedback(double opinion, double s_sm, double beta) {
    double raw = sm_feedback_raw(opinion, s_sm, beta);
    if (raw > 1.0) {
        return 0.95;
    }
    if (raw < 0.0) {
        return 0.05;
    }
    return raw;
}

double blend(double prior, double promoted, double s, double gamma) {
    if (s == 1.0) {
        return promoted;
    }
    double d = promoted - prior;
    double oms = 1.0 - s;
    double geff = std::min(gamma, 1.0 / oms);
    double e = geff * oms * std::abs(d);
    double out = prior + s * d * std::exp(-e);
    return std::min(std::max(out, 0.0), 1.0);
}

double gov_feedback(double mean_opinion, double zeta) {
    return std::min(std::max(zeta * mean_opinion, 0.05), 0.95);
}

double fatigue_factor(std::int64_t tick, double fatigue_rate) {
    double weeks = static_cast<double>(tick / 7);
    return std::exp(-fatigue_rate * weeks);
}

double fatigue_step(double s_gov, std::int64_t tick, double fatigue_rate) {
    return s_gov * fatigue_factor(tick, fatigue_rate);
}

} // namespace ffsim
