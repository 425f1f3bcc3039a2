#include "ffsim/model.hpp"

#include <algorithm>

namespace ffsim {

double purchase_probability(const AgentState& a) {
    double p = kDecisionCoef[0];
    p = p + kDecisionCoef[1] * a.sex;
    p = p + kDecisionCoef[2] * a.age;
    p = p + kDecisionCoef[3] * a.env;
    p = p + kDecisionCoef[4] * a.exp;
    p = p + kDecisionCoef[5] * a.wca;
    p = p + kDecisionCoef[6] * a.know;
    p = p + kDecisionCoef[7] * a.trust;
    p = p + kDecisionCoef[8] * a.access;
    p = p + kDecisionCoef[9] * a.freq;
    return std::min(std::max(p, kProbFloor), kProbCeil);
}

} // namespace ffsim
