#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffsim/influence.hpp"
#include "ffsim/model.hpp"
#include "ffsim/population.hpp"

namespace ffsim {

struct EngineConfig {
    std::int64_t ticks = 500;
    std::optional<std::int64_t> campaign_stop_tick; // campaigns cease at this tick
    std::uint64_t seed = 0;
    std::int64_t record_every = 1;

    // Mechanism switches. Disabling a phase skips its random draws entirely;
    // phases consume independent seed substreams, so the others are
    // unaffected (each mechanism is removable in isolation).
    bool disable_peer = false;
    bool disable_media = false;
    bool disable_gov = false;

    std::string backend = "auto"; // batch-kernel backend: scalar | avx2 | auto

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Empty string when valid, else a diagnostic.
std::string validate_engine_config(const EngineConfig& ec);

/// The attributes tracked per recorded tick, in series order.
inline constexpr std::array<const char*, 5> kMetricAttrs = {
    "env", "wca", "know", "trust", "purchase_prob"};

struct MetricsSeries {
    std::vector<std::int64_t> ticks; // recorded tick numbers; ticks[0] == 0

    // mean[a][k], variance[a][k]: population mean / variance of attribute
    // kMetricAttrs[a] at record k. Variance is the biased (1/N) form.
    std::array<std::vector<double>, 5> mean;
    std::array<std::vector<double>, 5> variance;

    double net_change(std::size_t attr, std::size_t record) const {
        return mean[attr][record] - mean[attr][0];
    }
    std::size_t records() const { return ticks.size(); }

    // Diagnostics kept at every tick regardless of record_every (never
    // emitted to CSV): mean government susceptibility (index 0 = initial,
    // index t+1 = after tick t) and the extreme attribute values seen at
    // any tick, for cheap boundedness checks.
    std::vector<double> s_gov_mean;
    double attr_min = 0.0;
    double attr_max = 0.0;
};

struct RunResult {
    MetricsSeries metrics;
    std::vector<AgentState> agents; // final population snapshot
};

/// Executes one deterministic simulation. Within a tick:
///   1. a campaign topic is drawn uniformly from {env, wca, know, trust}
///   2. peer phase (synchronous): every agent engages with probability
///      2*delta; engaged agents sample daily contacts and update env, wca
///      and know via peer_update, all reads from the start-of-tick snapshot
///   3. media phase: 2*sigma of the population (without replacement, ids
///      processed in ascending order) update env, wca and know via
///      sm_feedback followed by blend with s_sm
///   4. government phase (zeta present, tick < campaign_stop_tick): the
///      promoted opinion is gov_feedback of the current topic mean; each
///      agent is exposed with probability gov_exposure_prob and blends the
///      topic attribute with s_gov; afterwards every s_gov decays by the
///      fatigue factor of this tick
///   5. purchase_prob is recomputed for every agent
///   6. metrics are recorded when (tick+1) is a multiple of record_every
/// The baseline record (tick 0) is captured before the first tick.
///
/// Determinism: all draws come from fixed-label substreams of the seed
/// ("population", "graph", "topic", "peer", "media", "gov"), with exact
/// draw orders documented in the implementation. Identical configs produce
/// bit-identical results on every backend.
///
/// Throws std::runtime_error on invalid configuration; valid configurations
/// never fail mid-run.
RunResult run(const PopulationSpec& pop, const KernelParams& kp,
              const EngineConfig& ec);

/// One sweep cell: a complete configuration to be run under several seeds.
struct SweepCell {
    std::string label;
    PopulationSpec population;
    KernelParams kernels;
    EngineConfig engine; // seed field is overwritten per sweep seed
};

/// Final-tick net-change aggregation over the seeds of one cell.
struct CellSummary {
    std::string label;
    std::size_t runs = 0;
    std::array<double, 5> net_mean{}; // per kMetricAttrs
    std::array<double, 5> net_sd{};   // sample sd over seeds; 0 for one seed
};

/// Runs |cells| x |seeds| independent simulations and aggregates each cell.
/// Cells may execute on `threads` worker threads (0 = hardware default);
/// results are written into per-run slots and reduced in fixed order, so
/// the outcome is independent of scheduling. Throws on an empty seed list
/// or any invalid cell; validation runs before any simulation starts.
std::vector<CellSummary> run_sweep(std::span<const SweepCell> cells,
                                   std::span<const std::uint64_t> seeds,
                                   unsigned threads = 0);

} // namespace ffsim
