#include "ffsim/population.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ffsim {

namespace {

constexpr std::size_t kClique = 6;
constexpr std::size_t kInner = 5;
constexpr std::size_t kOuter = 10;
constexpr std::size_t kContacts = 15;

std::string beta_error(const char* attr, const BetaSpec& b) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "beta parameters for %s must be positive (got alpha=%g, beta=%g)",
                  attr, b.alpha, b.beta);
    return buf;
}

} // namespace

std::string validate_population_spec(const PopulationSpec& spec) {
    if (spec.n_agents == 0 || spec.n_agents % kClique != 0) {
        return "n_agents must be a positive multiple of 6 (got " +
               std::to_string(spec.n_agents) + ")";
    }
    if (spec.female_fraction < 0.0 || spec.female_fraction > 1.0) {
        return "female_fraction must lie in [0, 1]";
    }
    if (spec.young_fraction < 0.0 || spec.young_fraction > 1.0) {
        return "young_fraction must lie in [0, 1]";
    }
    const struct { const char* name; const BetaSpec& b; } dists[] = {
        {"env", spec.env},       {"exp", spec.exp},   {"wca", spec.wca},
        {"know", spec.know},     {"trust", spec.trust},
        {"access", spec.access}, {"freq", spec.freq},
    };
    for (const auto& d : dists) {
        if (!(d.b.alpha > 0.0) || !(d.b.beta > 0.0)) {
            return beta_error(d.name, d.b);
        }
    }
    if (!(spec.susc_lo >= 0.0 && spec.susc_lo <= spec.susc_hi && spec.susc_hi <= 1.0)) {
        return "susceptibility_range must satisfy 0 <= lo <= hi <= 1";
    }
    return {};
}

std::vector<AgentState> synthesize_population(const PopulationSpec& spec, Rng& rng) {
    if (std::string err = validate_population_spec(spec); !err.empty()) {
        throw std::runtime_error("population spec: " + err);
    }
    std::vector<AgentState> agents(spec.n_agents);
    for (AgentState& a : agents) {
        a.sex = rng.bernoulli(spec.female_fraction) ? 1.0 : 0.0;
        if (rng.bernoulli(spec.young_fraction)) {
            a.age = 0.0;
        } else {
            a.age = 0.2 * static_cast<double>(1 + rng.uniform_int(5));
        }
        a.env = rng.beta(spec.env.alpha, spec.env.beta);
        a.exp = rng.beta(spec.exp.alpha, spec.exp.beta);
        a.wca = rng.beta(spec.wca.alpha, spec.wca.beta);
        a.know = rng.beta(spec.know.alpha, spec.know.beta);
        a.trust = rng.beta(spec.trust.alpha, spec.trust.beta);
        a.access = rng.beta(spec.access.alpha, spec.access.beta);
        a.freq = rng.beta(spec.freq.alpha, spec.freq.beta);
        a.s_pp = rng.uniform(spec.susc_lo, spec.susc_hi);
        a.s_sm = rng.uniform(spec.susc_lo, spec.susc_hi);
        a.s_gov = rng.uniform(spec.susc_lo, spec.susc_hi);
        a.purchase_prob = purchase_probability(a);
    }
    return agents;
}

std::vector<AgentState> load_population_csv(const std::string& path,
                                            const PopulationSpec& spec, Rng& rng) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open population file: " + path);
    }
    static constexpr const char* kColumns[9] = {
        "sex", "age", "env", "exp", "wca", "know", "trust", "access", "freq"};

    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "sex,age,env,exp,wca,know,trust,access,freq") {
        throw std::runtime_error(path + ": header mismatch, expected "
                                 "'sex,age,env,exp,wca,know,trust,access,freq'");
    }

    std::vector<AgentState> agents;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        ++row;
        std::stringstream ss(line);
        std::string field;
        double values[9];
        for (int col = 0; col < 9; ++col) {
            if (!std::getline(ss, field, ',')) {
                throw std::runtime_error(path + ": row " + std::to_string(row) +
                                         " has fewer than 9 columns");
            }
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(field, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != field.size() || field.empty()) {
                throw std::runtime_error(path + ": row " + std::to_string(row) +
                                         ", column " + kColumns[col] +
                                         ": unparsable value '" + field + "'");
            }
            if (v < 0.0 || v > 1.0) {
                throw std::runtime_error(path + ": row " + std::to_string(row) +
                                         ", column " + kColumns[col] + ": value " +
                                         field + " outside [0, 1]");
            }
            values[col] = v;
        }
        if (std::getline(ss, field, ',')) {
            throw std::runtime_error(path + ": row " + std::to_string(row) +
                                     " has more than 9 columns");
        }
        AgentState a;
        a.sex = values[0];
        a.age = values[1];
        a.env = values[2];
        a.exp = values[3];
        a.wca = values[4];
        a.know = values[5];
        a.trust = values[6];
        a.access = values[7];
        a.freq = values[8];
        a.s_pp = rng.uniform(spec.susc_lo, spec.susc_hi);
        a.s_sm = rng.uniform(spec.susc_lo, spec.susc_hi);
        a.s_gov = rng.uniform(spec.susc_lo, spec.susc_hi);
        a.purchase_prob = purchase_probability(a);
        agents.push_back(a);
    }
    if (agents.empty()) {
        throw std::runtime_error(path + ": no agent rows");
    }
    return agents;
}

SocialGraph build_graph(std::size_t n_agents, Rng& rng) {
    if (n_agents % kClique != 0) {
        throw std::runtime_error("graph size must be a multiple of 6 (got " +
                                 std::to_string(n_agents) + ")");
    }
    if (n_agents < kClique + kOuter) {
        // Fewer than 10 out-of-clique candidates per agent cannot satisfy
        // the 15-contact contract; 18 is the smallest multiple of 6 that can.
        throw std::runtime_error("graph needs at least 18 agents (got " +
                                 std::to_string(n_agents) + ")");
    }
    SocialGraph g;
    g.n = n_agents;
    g.contacts.resize(n_agents * kContacts);

    std::vector<char> taken(n_agents, 0);
    for (std::size_t i = 0; i < n_agents; ++i) {
        std::uint32_t* row = g.contacts.data() + i * kContacts;
        std::size_t base = (i / kClique) * kClique;

        std::size_t k = 0;
        for (std::size_t j = base; j < base + kClique; ++j) {
            if (j != i) {
                row[k++] = static_cast<std::uint32_t>(j);
            }
        }

        std::uint32_t picked[kOuter];
        std::size_t m = 0;
        while (m < kOuter) {
            auto c = static_cast<std::uint32_t>(rng.uniform_int(n_agents));
            if (c >= base && c < base + kClique) {
                continue;
            }
            if (taken[c]) {
                continue;
            }
            taken[c] = 1;
            picked[m++] = c;
        }
        for (std::size_t j = 0; j < kOuter; ++j) {
            taken[picked[j]] = 0;
        }
        std::sort(picked, picked + kOuter);
        std::copy(picked, picked + kOuter, row + kInner);
    }
    return g;
}

std::size_t sample_contact_count(Rng& rng) {
    std::size_t a = 1 + static_cast<std::size_t>(rng.uniform_int(4));
    std::size_t sign = static_cast<std::size_t>(rng.uniform_int(2));
    return sign == 0 ? 10 - a : 10 + a;
}

std::size_t sample_daily_contacts_into(std::uint32_t agent, const SocialGraph& graph,
                                       Rng& rng, std::uint32_t* out) {
    std::size_t count = sample_contact_count(rng);
    std::uint32_t pool[kContacts];
    std::span<const std::uint32_t> all = graph.all(agent);
    std::copy(all.begin(), all.end(), pool);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(kContacts - i));
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return count;
}

std::vector<std::uint32_t> sample_daily_contacts(std::uint32_t agent,
                                                 const SocialGraph& graph, Rng& rng) {
    std::uint32_t buf[kContacts];
    std::size_t count = sample_daily_contacts_into(agent, graph, rng, buf);
    return {buf, buf + count};
}

} // namespace ffsim
