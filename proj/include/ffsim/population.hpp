#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ffsim/model.hpp"
#include "ffsim/rng.hpp"

namespace ffsim {

struct BetaSpec {
    double alpha = 1.0;
    double beta = 1.0;

    friend bool operator==(const BetaSpec&, const BetaSpec&) = default;
};

/// How to construct the agentset. The attribute Betas are calibrated so a
/// default population starts with high, fairly uniform environmental
/// concern, low institutional trust, and a high mean purchase probability
/// (about 0.70); every choice is overridable from config. Trust deserves a
/// note: it is the one attribute moved only by campaigns, so whatever a
/// campaign does to it outlives the run, and a high starting value lets
/// pro-sustainability campaigns raise purchasing through the positive
/// trust coefficient alone.
struct PopulationSpec {
    std::size_t n_agents = 1050;
    double female_fraction = 0.80;
    double young_fraction = 0.50;

    BetaSpec env{14.0, 6.0};
    BetaSpec exp{2.0, 4.0};
    BetaSpec wca{2.0, 3.0};
    BetaSpec know{2.0, 3.0};
    BetaSpec trust{2.0, 14.0};
    BetaSpec access{3.0, 3.0};
    BetaSpec freq{2.0, 3.0};

    double susc_lo = 0.1;
    double susc_hi = 0.9;

    std::string csv_path; // empty = synthetic sampling

    friend bool operator==(const PopulationSpec&, const PopulationSpec&) = default;
};

/// Empty string when valid, else a message naming the offending field.
std::string validate_population_spec(const PopulationSpec& spec);

/// Friendship structure: agents are tiled into 6-cliques by consecutive id
/// (0-5, 6-11, ...); each agent additionally picks 10 acquaintances outside
/// its clique (directed, no duplicates). Contacts are stored per agent as
/// the 5 clique partners in ascending id order followed by the 10
/// acquaintances in ascending id order.
struct SocialGraph {
    std::size_t n = 0;
    std::vector<std::uint32_t> contacts; // n * 15, layout described above

    std::span<const std::uint32_t> all(std::size_t agent) const {
        return {contacts.data() + agent * 15, 15};
    }
    std::span<const std::uint32_t> inner(std::size_t agent) const {
        return {contacts.data() + agent * 15, 5};
    }
    std::span<const std::uint32_t> outer(std::size_t agent) const {
        return {contacts.data() + agent * 15 + 5, 10};
    }
};

/// Draws the agentset. Per agent, the draw order is fixed: sex, age, then
/// env, exp, wca, know, trust, access, freq from their Beta specs, then
/// s_pp, s_sm, s_gov uniform in the susceptibility range. purchase_prob is
/// filled in from the decision model. Throws std::runtime_error on an
/// invalid spec.
std::vector<AgentState> synthesize_population(const PopulationSpec& spec, Rng& rng);

/// Reads agents from a CSV with header `sex,age,env,exp,wca,know,trust,
/// access,freq` (values already normalized to [0,1]). Susceptibilities are
/// drawn from rng exactly as in synthesize_population. Errors name the
/// 1-based data row and the column.
std::vector<AgentState> load_population_csv(const std::string& path,
                                            const PopulationSpec& spec, Rng& rng);

/// Builds the clique-plus-acquaintances graph. Acquaintances are drawn by
/// rejection sampling (uniform over agents, rejecting self-clique members
/// and repeats), in agent id order, then stored sorted. Requires n_agents
/// divisible by 6 and at least 18 so 10 out-of-clique candidates exist.
SocialGraph build_graph(std::size_t n_agents, Rng& rng);

/// Number of partners for one day of conversations: 10±a with a drawn
/// uniformly from {1,2,3,4} and the sign drawn uniformly (0 = minus).
/// Never exactly 10.
std::size_t sample_contact_count(Rng& rng);

/// Fills `out` with sample_contact_count() distinct partners chosen
/// uniformly without replacement from the agent's 15 contacts (partial
/// Fisher-Yates over the stored contact order; output order is the shuffle
/// order, not sorted). Returns the count. `out` must hold 15 entries.
std::size_t sample_daily_contacts_into(std::uint32_t agent, const SocialGraph& graph,
                                       Rng& rng, std::uint32_t* out);

/// Convenience wrapper returning a fresh vector.
std::vector<std::uint32_t> sample_daily_contacts(std::uint32_t agent,
                                                 const SocialGraph& graph, Rng& rng);

} // namespace ffsim
