#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace ffsim {

/// Tunable parameters of the influence mechanisms. Optional fields switch a
/// mechanism variant on or off: tau present selects the polarized peer rule,
/// zeta present enables government campaigns.
struct KernelParams {
    double delta = 0.05;              // engagement threshold, in [0.05, 0.5]
    std::optional<double> tau;        // tolerance, in [0.05, 0.5]
    double sigma = 0.05;              // media exposure, in [0.05, 0.5]
    double beta = 0.0;                // media bias, in [-0.30, 0.30]
    std::optional<double> zeta;       // government stance, in [0.5, 1.5]
    double gov_exposure_prob = 0.5;   // per-agent per-tick campaign reach
    double blend_gamma = 2.0;         // damping strength of blend()
    double fatigue_rate = 0.00125;    // weekly campaign-fatigue decay

    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Range-checks every field. Returns an empty string when valid, otherwise a
/// message naming the offending field and its permitted range.
std::string validate_kernel_params(const KernelParams& p);

/// One neighbor's state as seen by the agent being updated.
struct PeerTerm {
    double opinion = 0.0;
    double behavior = 0.0;
    double s_pp = 0.0;
};

/// Peer-influence update. Only peers less susceptible than the agent are
/// heard (s_pp < s_pp_self, strict); each contributes (1/3)·opinion +
/// (2/3)·behavior. With tau present (polarized mode), a peer whose opinion
/// differs from the agent's by more than tau has both terms flipped to
/// 1 − value. The result mixes the mean contribution into the prior opinion
/// with weight s_pp_self; with no eligible peers the opinion is unchanged.
double peer_update(double self_opinion, double s_pp_self,
                   std::span<const PeerTerm> peers, std::optional<double> tau);

/// Social-media response curve before capping: a cubic through (0.5, 0.5)
/// whose steepness grows with susceptibility (b = 50·s_sm), shifted by the
/// platform bias beta.
double sm_feedback_raw(double opinion, double s_sm, double beta);

/// sm_feedback_raw with out-of-range outputs pulled back inside: values
/// above 1 become 0.95, values below 0 become 0.05. Values already in [0,1]
/// pass through untouched.
double sm_feedback(double opinion, double s_sm, double beta);

/// Moves prior toward promoted by susceptibility S, damped exponentially in
/// the distance so large gaps move proportionally less:
///   prior + S·d·exp(−γ_eff·(1−S)·|d|),  d = promoted − prior,
/// with γ_eff = min(gamma, 1/(1−S)) so the result is monotone in promoted.
/// Exact at the fixed point (promoted == prior), at S = 0, and at S = 1
/// (returns promoted). Clamped to [0, 1].
double blend(double prior, double promoted, double s, double gamma);

/// Campaign stance broadcast by the government: the population mean scaled
/// by zeta, kept inside [0.05, 0.95].
double gov_feedback(double mean_opinion, double zeta);

/// Campaign fatigue: susceptibility decays by exp(−rate·T) where T counts
/// completed weeks of 7 ticks. Applied once per tick while a campaign runs,
/// so the decay compounds within a week.
double fatigue_step(double s_gov, std::int64_t tick, double fatigue_rate);

/// The per-tick fatigue factor alone (callers scaling a whole population
/// multiply by this; bitwise identical to fatigue_step per agent).
double fatigue_factor(std::int64_t tick, double fatigue_rate);

} // namespace ffsim
