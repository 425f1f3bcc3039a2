#pragma once

#include <cstdint>

namespace ffsim {

/// One simulated consumer. Attribute scores live in [0, 1]; sex is coded
/// 1 = female, 0 = male; age is a normalized bracket in {0.0, 0.2, ..., 1.0}.
struct AgentState {
    double sex = 0.0;
    double age = 0.0;
    double env = 0.0;    // environmental concern
    double exp = 0.0;    // exposure to fast-fashion marketing
    double wca = 0.0;    // willingness to change habits
    double know = 0.0;   // knowledge of industry practices
    double trust = 0.0;  // trust in sustainability claims
    double access = 0.0; // access to fast-fashion outlets
    double freq = 0.0;   // shopping frequency

    double s_pp = 0.0;  // susceptibility to peer influence
    double s_sm = 0.0;  // susceptibility to social media
    double s_gov = 0.0; // susceptibility to government campaigns

    double purchase_prob = 0.0;

    friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Regression coefficients of the purchase-decision model, in predictor
/// order: intercept, sex, age, env, exp, wca, know, trust, access, freq.
inline constexpr double kDecisionCoef[10] = {
    0.7450,  // intercept
    -0.0101, // sex
    0.0200,  // age
    -0.0179, // env
    -0.0488, // exp
    -0.1783, // wca
    -0.1414, // know
    0.0320,  // trust
    0.0360,  // access
    0.2181,  // freq
};

/// Purchase probabilities are clamped away from 0 and 1 so that no agent is
/// ever fully committed either way.
inline constexpr double kProbFloor = 0.01;
inline constexpr double kProbCeil = 0.99;

/// Linear purchase-decision score, clamped to [kProbFloor, kProbCeil].
/// Terms are accumulated strictly in predictor order; the SIMD kernels
/// replicate this order to stay bit-identical.
double purchase_probability(const AgentState& a);

/// Anti-consumption behavior read off the decision score: an agent unlikely
/// to buy is treated as exhibiting the behavior.
inline double behavior_proxy(double purchase_prob) {
    return 1.0 - purchase_prob;
}

} // namespace ffsim
