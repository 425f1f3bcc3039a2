// Reference implementation for equivalence testing. Everything here is
// deliberately flat and duplicated: the point is an independent derivation
// of each tick from the model definitions, not shared code. Keep this file
// free of calls into the influence/kernels/engine modules.

#include "oracle.hpp"

#include "ffsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace ffsim::oracle {

namespace {

double decision_score(const AgentState& a) {
    double p = 0.7450;
    p = p + -0.0101 * a.sex;
    p = p + 0.0200 * a.age;
    p = p + -0.0179 * a.env;
    p = p + -0.0488 * a.exp;
    p = p + -0.1783 * a.wca;
    p = p + -0.1414 * a.know;
    p = p + 0.0320 * a.trust;
    p = p + 0.0360 * a.access;
    p = p + 0.2181 * a.freq;
    if (p < 0.01) {
        p = 0.01;
    }
    if (p > 0.99) {
        p = 0.99;
    }
    return p;
}

double blend_inline(double prior, double promoted, double s, double gamma) {
    if (s == 1.0) {
        return promoted;
    }
    double d = promoted - prior;
    double oms = 1.0 - s;
    double geff = gamma;
    double cap = 1.0 / oms;
    if (cap < geff) {
        geff = cap;
    }
    double e = geff * oms * std::abs(d);
    double out = prior + s * d * std::exp(-e);
    if (out < 0.0) {
        out = 0.0;
    }
    if (out > 1.0) {
        out = 1.0;
    }
    return out;
}

} // namespace

std::vector<std::vector<AgentState>> simulate(const PopulationSpec& pop,
                                              const KernelParams& kp,
                                              const EngineConfig& ec) {
    Rng pop_rng = Rng::substream(ec.seed, "population");
    std::vector<AgentState> agents;
    if (pop.csv_path.empty()) {
        agents = synthesize_population(pop, pop_rng);
    } else {
        agents = load_population_csv(pop.csv_path, pop, pop_rng);
    }
    Rng graph_rng = Rng::substream(ec.seed, "graph");
    SocialGraph graph = build_graph(agents.size(), graph_rng);

    Rng topic_rng = Rng::substream(ec.seed, "topic");
    Rng peer_rng = Rng::substream(ec.seed, "peer");
    Rng media_rng = Rng::substream(ec.seed, "media");
    Rng gov_rng = Rng::substream(ec.seed, "gov");

    const std::size_t n = agents.size();
    const double engage_p = 2.0 * kp.delta;
    const bool gov_enabled = kp.zeta.has_value() && !ec.disable_gov;
    const std::int64_t stop =
        ec.campaign_stop_tick ? *ec.campaign_stop_tick : ec.ticks;
    const std::size_t media_m =
        ec.disable_media
            ? 0
            : static_cast<std::size_t>(
                  std::llround(2.0 * kp.sigma * static_cast<double>(n)));

    std::vector<std::vector<AgentState>> trace;
    trace.push_back(agents);

    for (std::int64_t t = 0; t < ec.ticks; ++t) {
        std::size_t topic = static_cast<std::size_t>(topic_rng.uniform_int(4));

        if (!ec.disable_peer) {
            std::vector<AgentState> next = agents;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(peer_rng.next_double() < engage_p)) {
                    continue;
                }
                std::size_t a = 1 + static_cast<std::size_t>(peer_rng.uniform_int(4));
                std::size_t sign = static_cast<std::size_t>(peer_rng.uniform_int(2));
                std::size_t count = sign == 0 ? 10 - a : 10 + a;

                std::uint32_t pool[15];
                std::span<const std::uint32_t> all = graph.all(i);
                std::copy(all.begin(), all.end(), pool);
                std::uint32_t chosen[15];
                for (std::size_t k = 0; k < count; ++k) {
                    std::size_t j =
                        k + static_cast<std::size_t>(peer_rng.uniform_int(15 - k));
                    std::swap(pool[k], pool[j]);
                    chosen[k] = pool[k];
                }

                // env, wca, know in that order, all from the tick snapshot
                for (int attr = 0; attr < 3; ++attr) {
                    double self =
                        attr == 0 ? agents[i].env : attr == 1 ? agents[i].wca
                                                              : agents[i].know;
                    double sum = 0.0;
                    int k = 0;
                    for (std::size_t cidx = 0; cidx < count; ++cidx) {
                        const AgentState& peer = agents[chosen[cidx]];
                        if (!(peer.s_pp < agents[i].s_pp)) {
                            continue;
                        }
                        double op = attr == 0 ? peer.env : attr == 1 ? peer.wca
                                                                     : peer.know;
                        double be = 1.0 - peer.purchase_prob;
                        if (kp.tau && std::abs(op - self) > *kp.tau) {
                            op = 1.0 - op;
                            be = 1.0 - be;
                        }
                        sum = sum + (op * (1.0 / 3.0) + be * (2.0 / 3.0));
                        ++k;
                    }
                    if (k > 0) {
                        double mixed = (1.0 - agents[i].s_pp) * self +
                                       (agents[i].s_pp / k) * sum;
                        if (mixed < 0.0) {
                            mixed = 0.0;
                        }
                        if (mixed > 1.0) {
                            mixed = 1.0;
                        }
                        self = mixed;
                    }
                    if (attr == 0) {
                        next[i].env = self;
                    } else if (attr == 1) {
                        next[i].wca = self;
                    } else {
                        next[i].know = self;
                    }
                }
            }
            agents = next;
        }

        if (media_m > 0) {
            std::vector<std::uint32_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0u);
            for (std::size_t i = 0; i < media_m; ++i) {
                std::size_t j =
                    i + static_cast<std::size_t>(media_rng.uniform_int(n - i));
                std::swap(idx[i], idx[j]);
            }
            std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(media_m));

            // Matches the engine's per-attribute batches: all promoted values
            // derive from the pre-media attribute values, which holds here
            // because each selected agent is touched exactly once per attr.
            for (int attr = 0; attr < 3; ++attr) {
                for (std::size_t k = 0; k < media_m; ++k) {
                    AgentState& ag = agents[idx[k]];
                    double x = attr == 0 ? ag.env : attr == 1 ? ag.wca : ag.know;
                    double b = 50.0 * ag.s_sm;
                    double x2 = x * x;
                    double raw = b * x2 * x - 1.5 * b * x2 + 0.75 * b * x +
                                 (0.5 - 0.125 * b) + kp.beta;
                    double promoted = raw;
                    if (raw > 1.0) {
                        promoted = 0.95;
                    } else if (raw < 0.0) {
                        promoted = 0.05;
                    }
                    double blended = blend_inline(x, promoted, ag.s_sm, kp.blend_gamma);
                    if (attr == 0) {
                        ag.env = blended;
                    } else if (attr == 1) {
                        ag.wca = blended;
                    } else {
                        ag.know = blended;
                    }
                }
            }
        }

        if (gov_enabled && t < stop) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const AgentState& ag = agents[i];
                acc += topic == 0 ? ag.env : topic == 1 ? ag.wca
                                          : topic == 2 ? ag.know : ag.trust;
            }
            double mean = acc / static_cast<double>(n);
            double promoted = *kp.zeta * mean;
            if (promoted < 0.05) {
                promoted = 0.05;
            }
            if (promoted > 0.95) {
                promoted = 0.95;
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (!(gov_rng.next_double() < kp.gov_exposure_prob)) {
                    continue;
                }
                AgentState& ag = agents[i];
                double x = topic == 0 ? ag.env : topic == 1 ? ag.wca
                                     : topic == 2 ? ag.know : ag.trust;
                double blended = blend_inline(x, promoted, ag.s_gov, kp.blend_gamma);
                if (topic == 0) {
                    ag.env = blended;
                } else if (topic == 1) {
                    ag.wca = blended;
                } else if (topic == 2) {
                    ag.know = blended;
                } else {
                    ag.trust = blended;
                }
            }
            double factor =
                std::exp(-kp.fatigue_rate * static_cast<double>(t / 7));
            for (std::size_t i = 0; i < n; ++i) {
                agents[i].s_gov = agents[i].s_gov * factor;
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            agents[i].purchase_prob = decision_score(agents[i]);
        }
        trace.push_back(agents);
    }
    return trace;
}

std::size_t diff_engine(const PopulationSpec& pop, const KernelParams& kp,
                        const EngineConfig& ec, std::string* report) {
    static_assert(sizeof(AgentState) == 13 * sizeof(double),
                  "AgentState must stay a packed array of doubles for the "
                  "bitwise comparison below");
    std::vector<std::vector<AgentState>> expected = simulate(pop, kp, ec);
    std::size_t mismatches = 0;
    for (std::int64_t k = 0; k <= ec.ticks; ++k) {
        EngineConfig prefix = ec;
        prefix.ticks = k;
        // Campaigns gated on t < stop behave identically under min(stop, k)
        // for t < k, and the clamp keeps the prefix config valid.
        if (prefix.campaign_stop_tick && *prefix.campaign_stop_tick > k) {
            prefix.campaign_stop_tick = k;
        }
        RunResult r = run(pop, kp, prefix);
        const std::vector<AgentState>& want = expected[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (std::memcmp(&r.agents[i], &want[i], sizeof(AgentState)) != 0) {
                ++mismatches;
                if (report && mismatches == 1) {
                    *report = "first mismatch at tick " + std::to_string(k) +
                              ", agent " + std::to_string(i);
                }
            }
        }
    }
    return mismatches;
}

} // namespace ffsim::oracle
