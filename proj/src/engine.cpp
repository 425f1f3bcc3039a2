#include "ffsim/engine.hpp"

#include "ffsim/kernels.hpp"
#include "ffsim/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace ffsim {

std::string validate_engine_config(const EngineConfig& ec) {
    if (ec.ticks < 0) {
        return "ticks must be non-negative";
    }
    if (ec.record_every < 1) {
        return "record_every must be at least 1";
    }
    if (ec.campaign_stop_tick) {
        if (*ec.campaign_stop_tick < 0) {
            return "campaign_stop_tick must be non-negative";
        }
        if (*ec.campaign_stop_tick > ec.ticks) {
            return "campaign_stop_tick must not exceed ticks";
        }
    }
    if (ec.backend != "scalar" && ec.backend != "avx2" && ec.backend != "auto") {
        return "backend must be one of: scalar, avx2, auto";
    }
    return {};
}

namespace {

/// Column storage for the running population. The engine works on arrays so
/// the batch kernels can stream them; AgentState is only the interchange
/// format at the boundaries.
struct Cols {
    std::size_t n = 0;
    std::vector<double> sex, age, env, exp, wca, know, trust, access, freq;
    std::vector<double> s_pp, s_sm, s_gov, pp;
};

Cols split_agents(const std::vector<AgentState>& agents) {
    Cols c;
    c.n = agents.size();
    for (auto* v : {&c.sex, &c.age, &c.env, &c.exp, &c.wca, &c.know, &c.trust,
                    &c.access, &c.freq, &c.s_pp, &c.s_sm, &c.s_gov, &c.pp}) {
        v->resize(c.n);
    }
    for (std::size_t i = 0; i < c.n; ++i) {
        const AgentState& a = agents[i];
        c.sex[i] = a.sex;
        c.age[i] = a.age;
        c.env[i] = a.env;
        c.exp[i] = a.exp;
        c.wca[i] = a.wca;
        c.know[i] = a.know;
        c.trust[i] = a.trust;
        c.access[i] = a.access;
        c.freq[i] = a.freq;
        c.s_pp[i] = a.s_pp;
        c.s_sm[i] = a.s_sm;
        c.s_gov[i] = a.s_gov;
        c.pp[i] = a.purchase_prob;
    }
    return c;
}

void merge_agents(const Cols& c, std::vector<AgentState>& agents) {
    for (std::size_t i = 0; i < c.n; ++i) {
        AgentState& a = agents[i];
        a.env = c.env[i];
        a.wca = c.wca[i];
        a.know = c.know[i];
        a.trust = c.trust[i];
        a.s_gov = c.s_gov[i];
        a.purchase_prob = c.pp[i];
    }
}

/// Id-order scalar accumulation; the oracle reproduces this sum order.
double mean_of(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) {
        acc += v;
    }
    return acc / static_cast<double>(x.size());
}

double variance_of(const std::vector<double>& x, double mean) {
    double acc = 0.0;
    for (double v : x) {
        double d = v - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(x.size());
}

void record_metrics(MetricsSeries& ms, std::int64_t tick, const Cols& c) {
    const std::vector<double>* series[5] = {&c.env, &c.wca, &c.know, &c.trust, &c.pp};
    ms.ticks.push_back(tick);
    for (std::size_t a = 0; a < 5; ++a) {
        double m = mean_of(*series[a]);
        ms.mean[a].push_back(m);
        ms.variance[a].push_back(variance_of(*series[a], m));
    }
}

void track_bounds(MetricsSeries& ms, const Cols& c) {
    const std::vector<double>* series[5] = {&c.env, &c.wca, &c.know, &c.trust, &c.pp};
    for (const auto* s : series) {
        for (double v : *s) {
            ms.attr_min = std::min(ms.attr_min, v);
            ms.attr_max = std::max(ms.attr_max, v);
        }
    }
}

} // namespace

RunResult run(const PopulationSpec& pop, const KernelParams& kp,
              const EngineConfig& ec) {
    if (std::string err = validate_kernel_params(kp); !err.empty()) {
        throw std::runtime_error("kernel params: " + err);
    }
    if (std::string err = validate_engine_config(ec); !err.empty()) {
        throw std::runtime_error("engine config: " + err);
    }
    const BatchKernels* backend = select_batch(ec.backend);
    if (backend == nullptr) {
        throw std::runtime_error("kernel backend '" + ec.backend +
                                 "' is not available on this machine");
    }

    Rng pop_rng = Rng::substream(ec.seed, "population");
    std::vector<AgentState> agents;
    if (pop.csv_path.empty()) {
        agents = synthesize_population(pop, pop_rng);
    } else {
        if (!(pop.susc_lo >= 0.0 && pop.susc_lo <= pop.susc_hi && pop.susc_hi <= 1.0)) {
            throw std::runtime_error(
                "population spec: susceptibility_range must satisfy 0 <= lo <= hi <= 1");
        }
        agents = load_population_csv(pop.csv_path, pop, pop_rng);
    }
    Rng graph_rng = Rng::substream(ec.seed, "graph");
    SocialGraph graph = build_graph(agents.size(), graph_rng);

    Rng topic_rng = Rng::substream(ec.seed, "topic");
    Rng peer_rng = Rng::substream(ec.seed, "peer");
    Rng media_rng = Rng::substream(ec.seed, "media");
    Rng gov_rng = Rng::substream(ec.seed, "gov");

    Cols c = split_agents(agents);
    const std::size_t n = c.n;

    RunResult result;
    MetricsSeries& ms = result.metrics;
    ms.attr_min = std::numeric_limits<double>::infinity();
    ms.attr_max = -std::numeric_limits<double>::infinity();
    record_metrics(ms, 0, c);
    track_bounds(ms, c);
    ms.s_gov_mean.push_back(mean_of(c.s_gov));

    const double engage_p = 2.0 * kp.delta;
    const bool gov_enabled = kp.zeta.has_value() && !ec.disable_gov;
    const std::int64_t stop =
        ec.campaign_stop_tick ? *ec.campaign_stop_tick : ec.ticks;
    const std::size_t media_m =
        ec.disable_media
            ? 0
            : static_cast<std::size_t>(std::llround(2.0 * kp.sigma * static_cast<double>(n)));

    // Scratch buffers reused across ticks.
    std::vector<double> env_next(n), wca_next(n), know_next(n);
    std::vector<std::uint32_t> idx(n), exposed(n);
    std::vector<double> gather_x(n), gather_s(n), gather_p(n);
    std::uint32_t chosen[15];
    PeerTerm terms_env[15], terms_wca[15], terms_know[15];

    for (std::int64_t t = 0; t < ec.ticks; ++t) {
        // 1. campaign topic (drawn every tick to keep the stream layout
        // independent of whether a government is configured)
        std::size_t topic = static_cast<std::size_t>(topic_rng.uniform_int(4));

        // 2. peer phase, synchronous: reads only the start-of-tick arrays,
        // writes the *_next buffers, swapped in afterwards. Draw order per
        // agent id: engagement bit, then (for engaged agents) the daily
        // contact sample.
        if (!ec.disable_peer) {
            std::copy(c.env.begin(), c.env.end(), env_next.begin());
            std::copy(c.wca.begin(), c.wca.end(), wca_next.begin());
            std::copy(c.know.begin(), c.know.end(), know_next.begin());
            for (std::size_t i = 0; i < n; ++i) {
                if (!peer_rng.bernoulli(engage_p)) {
                    continue;
                }
                std::size_t cnt = sample_daily_contacts_into(
                    static_cast<std::uint32_t>(i), graph, peer_rng, chosen);
                for (std::size_t k = 0; k < cnt; ++k) {
                    std::uint32_t p = chosen[k];
                    double behavior = behavior_proxy(c.pp[p]);
                    terms_env[k] = {c.env[p], behavior, c.s_pp[p]};
                    terms_wca[k] = {c.wca[p], behavior, c.s_pp[p]};
                    terms_know[k] = {c.know[p], behavior, c.s_pp[p]};
                }
                env_next[i] = peer_update(c.env[i], c.s_pp[i], {terms_env, cnt}, kp.tau);
                wca_next[i] = peer_update(c.wca[i], c.s_pp[i], {terms_wca, cnt}, kp.tau);
                know_next[i] = peer_update(c.know[i], c.s_pp[i], {terms_know, cnt}, kp.tau);
            }
            c.env.swap(env_next);
            c.wca.swap(wca_next);
            c.know.swap(know_next);
        }

        // 3. media phase: select media_m distinct agents by a partial
        // Fisher-Yates over a fresh identity permutation, process them in
        // ascending id order, each updating env, wca, know in that order.
        if (media_m > 0) {
            std::iota(idx.begin(), idx.end(), 0u);
            for (std::size_t i = 0; i < media_m; ++i) {
                std::size_t j = i + static_cast<std::size_t>(media_rng.uniform_int(n - i));
                std::swap(idx[i], idx[j]);
            }
            std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(media_m));
            for (std::size_t k = 0; k < media_m; ++k) {
                gather_s[k] = c.s_sm[idx[k]];
            }
            for (double* arr : {c.env.data(), c.wca.data(), c.know.data()}) {
                for (std::size_t k = 0; k < media_m; ++k) {
                    gather_x[k] = arr[idx[k]];
                }
                backend->sm_feedback(gather_x.data(), gather_s.data(), kp.beta,
                                     gather_p.data(), media_m);
                backend->blend(gather_x.data(), gather_p.data(), gather_s.data(),
                               kp.blend_gamma, gather_x.data(), media_m);
                for (std::size_t k = 0; k < media_m; ++k) {
                    arr[idx[k]] = gather_x[k];
                }
            }
        }

        // 4. government phase: campaign promoted opinion from the current
        // topic mean, exposure drawn per agent in id order, then fatigue on
        // every s_gov.
        if (gov_enabled && t < stop) {
            // Resolved here because the peer phase swaps the attribute
            // buffers every tick.
            double* topic_arrays[4] = {c.env.data(), c.wca.data(),
                                       c.know.data(), c.trust.data()};
            double* topic_arr = topic_arrays[topic];
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += topic_arr[i];
            }
            double promoted = gov_feedback(acc / static_cast<double>(n), *kp.zeta);
            std::size_t nexp = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (gov_rng.bernoulli(kp.gov_exposure_prob)) {
                    exposed[nexp++] = static_cast<std::uint32_t>(i);
                }
            }
            for (std::size_t k = 0; k < nexp; ++k) {
                gather_x[k] = topic_arr[exposed[k]];
                gather_s[k] = c.s_gov[exposed[k]];
                gather_p[k] = promoted;
            }
            backend->blend(gather_x.data(), gather_p.data(), gather_s.data(),
                           kp.blend_gamma, gather_x.data(), nexp);
            for (std::size_t k = 0; k < nexp; ++k) {
                topic_arr[exposed[k]] = gather_x[k];
            }
            backend->scale(c.s_gov.data(), fatigue_factor(t, kp.fatigue_rate), n);
        }

        // 5. refresh decision scores
        PredictorArrays preds = {c.sex.data(), c.age.data(),    c.env.data(),
                                 c.exp.data(), c.wca.data(),    c.know.data(),
                                 c.trust.data(), c.access.data(), c.freq.data()};
        backend->purchase_prob(preds, c.pp.data(), n);

        // 6. diagnostics and metrics
        ms.s_gov_mean.push_back(mean_of(c.s_gov));
        track_bounds(ms, c);
        if ((t + 1) % ec.record_every == 0) {
            record_metrics(ms, t + 1, c);
        }
    }

    merge_agents(c, agents);
    result.agents = std::move(agents);
    return result;
}

std::vector<CellSummary> run_sweep(std::span<const SweepCell> cells,
                                   std::span<const std::uint64_t> seeds,
                                   unsigned threads) {
    if (seeds.empty()) {
        throw std::runtime_error("sweep needs at least one seed");
    }
    for (const SweepCell& cell : cells) {
        if (std::string err = validate_kernel_params(cell.kernels); !err.empty()) {
            throw std::runtime_error("cell '" + cell.label + "': " + err);
        }
        if (std::string err = validate_engine_config(cell.engine); !err.empty()) {
            throw std::runtime_error("cell '" + cell.label + "': " + err);
        }
        if (cell.population.csv_path.empty()) {
            if (std::string err = validate_population_spec(cell.population); !err.empty()) {
                throw std::runtime_error("cell '" + cell.label + "': " + err);
            }
        }
    }

    const std::size_t n_cells = cells.size();
    const std::size_t n_seeds = seeds.size();
    const std::size_t n_tasks = n_cells * n_seeds;
    std::vector<std::array<double, 5>> net(n_tasks); // [cell * n_seeds + seed]

    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (workers == 0) {
        workers = 1;
    }
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, n_tasks == 0 ? 1 : n_tasks));

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto work = [&]() {
        for (;;) {
            std::size_t task = cursor.fetch_add(1);
            if (task >= n_tasks || failed.load()) {
                return;
            }
            const SweepCell& cell = cells[task / n_seeds];
            std::uint64_t seed = seeds[task % n_seeds];
            try {
                EngineConfig ec = cell.engine;
                ec.seed = seed;
                RunResult r = run(cell.population, cell.kernels, ec);
                std::size_t last = r.metrics.records() - 1;
                for (std::size_t a = 0; a < 5; ++a) {
                    net[task][a] = r.metrics.net_change(a, last);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!failed.exchange(true)) {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failed.load()) {
        std::rethrow_exception(first_error);
    }

    std::vector<CellSummary> out(n_cells);
    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        CellSummary& s = out[ci];
        s.label = cells[ci].label;
        s.runs = n_seeds;
        for (std::size_t a = 0; a < 5; ++a) {
            double acc = 0.0;
            for (std::size_t si = 0; si < n_seeds; ++si) {
                acc += net[ci * n_seeds + si][a];
            }
            double m = acc / static_cast<double>(n_seeds);
            s.net_mean[a] = m;
            if (n_seeds > 1) {
                double sq = 0.0;
                for (std::size_t si = 0; si < n_seeds; ++si) {
                    double d = net[ci * n_seeds + si][a] - m;
                    sq += d * d;
                }
                s.net_sd[a] = std::sqrt(sq / static_cast<double>(n_seeds - 1));
            }
        }
    }
    return out;
}

} // namespace ffsim
