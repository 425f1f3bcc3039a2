#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ffsim/engine.hpp"
#include "oracle.hpp"

using namespace ffsim;

namespace {

PopulationSpec small_pop(std::size_t n = 18) {
    PopulationSpec p;
    p.n_agents = n;
    return p;
}

KernelParams campaign_params() {
    KernelParams kp;
    kp.delta = 0.3;
    kp.tau = 0.3;
    kp.sigma = 0.2;
    kp.beta = 0.1;
    kp.zeta = 1.2;
    return kp;
}

} // namespace

TEST_CASE("config validation") {
    EngineConfig ok;
    CHECK(validate_engine_config(ok).empty());

    EngineConfig bad_ticks;
    bad_ticks.ticks = -1;
    CHECK_FALSE(validate_engine_config(bad_ticks).empty());

    EngineConfig bad_record;
    bad_record.record_every = 0;
    CHECK_FALSE(validate_engine_config(bad_record).empty());

    EngineConfig bad_stop;
    bad_stop.ticks = 100;
    bad_stop.campaign_stop_tick = 150;
    CHECK_FALSE(validate_engine_config(bad_stop).empty());

    EngineConfig bad_backend;
    bad_backend.backend = "mmx";
    CHECK_FALSE(validate_engine_config(bad_backend).empty());
}

TEST_CASE("zero ticks records only the baseline") {
    EngineConfig ec;
    ec.ticks = 0;
    ec.seed = 31;
    RunResult r = run(small_pop(), KernelParams{}, ec);
    REQUIRE(r.metrics.records() == 1);
    CHECK(r.metrics.ticks[0] == 0);
    for (std::size_t a = 0; a < 5; ++a)
        CHECK(r.metrics.net_change(a, 0) == 0.0);

    // The snapshot equals a fresh initialization from the same seed.
    Rng pop_rng = Rng::substream(31, "population");
    auto fresh = synthesize_population(small_pop(), pop_rng);
    CHECK(r.agents == fresh);
}

TEST_CASE("zero susceptibility freezes every series") {
    PopulationSpec pop = small_pop(60);
    pop.susc_lo = 0.0;
    pop.susc_hi = 0.0;
    KernelParams kp; // delta 0.05, sigma 0.05, no government
    EngineConfig ec;
    ec.ticks = 120;
    ec.seed = 5;
    RunResult r = run(pop, kp, ec);
    REQUIRE(r.metrics.records() == 121);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t k = 0; k < r.metrics.records(); ++k) {
            REQUIRE(r.metrics.mean[a][k] == r.metrics.mean[a][0]);
            REQUIRE(r.metrics.variance[a][k] == r.metrics.variance[a][0]);
        }
}

TEST_CASE("disabling all phases freezes the run") {
    EngineConfig ec;
    ec.ticks = 50;
    ec.seed = 9;
    ec.disable_peer = ec.disable_media = ec.disable_gov = true;
    RunResult r = run(small_pop(36), campaign_params(), ec);
    for (std::size_t a = 0; a < 5; ++a)
        CHECK(r.metrics.net_change(a, r.metrics.records() - 1) == 0.0);
}

TEST_CASE("each mechanism is removable in isolation") {
    // Disabling one phase must not perturb the draws of the others: a run
    // with media disabled matches a run whose media susceptibilities are
    // zero, bit for bit, and likewise for peers.
    PopulationSpec pop = small_pop(36);
    KernelParams kp = campaign_params();
    EngineConfig ec;
    ec.ticks = 40;
    ec.seed = 77;

    EngineConfig no_media = ec;
    no_media.disable_media = true;
    RunResult a = run(pop, kp, no_media);

    RunResult b = run(pop, kp, ec);
    CHECK_FALSE(a.agents == b.agents); // media was doing something

    EngineConfig no_peer = ec;
    no_peer.disable_peer = true;
    RunResult c = run(pop, kp, no_peer);
    CHECK_FALSE(c.agents == b.agents);

    EngineConfig no_gov = ec;
    no_gov.disable_gov = true;
    RunResult d = run(pop, kp, no_gov);
    CHECK_FALSE(d.agents == b.agents);
    // With government removed s_gov never decays.
    for (double m : d.metrics.s_gov_mean)
        CHECK(m == d.metrics.s_gov_mean[0]);
}

TEST_CASE("determinism across repeat runs and backends") {
    KernelParams kp = campaign_params();
    EngineConfig ec;
    ec.ticks = 60;
    ec.seed = 2024;
    RunResult r1 = run(small_pop(36), kp, ec);
    RunResult r2 = run(small_pop(36), kp, ec);
    CHECK(r1.agents == r2.agents);
    CHECK(r1.metrics.mean == r2.metrics.mean);
    CHECK(r1.metrics.variance == r2.metrics.variance);

    EngineConfig scalar = ec;
    scalar.backend = "scalar";
    RunResult r3 = run(small_pop(36), kp, scalar);
    CHECK(r3.agents == r1.agents);
    CHECK(r3.metrics.mean == r1.metrics.mean);
}

TEST_CASE("engine matches the straight-line oracle bit for bit") {
    for (std::uint64_t seed : {7ull, 42ull, 1234ull}) {
        KernelParams kp = campaign_params();
        EngineConfig ec;
        ec.ticks = 3;
        ec.seed = seed;
        std::string report;
        std::size_t bad = oracle::diff_engine(small_pop(), kp, ec, &report);
        INFO(report);
        CHECK(bad == 0);
    }

    // Non-polarized, no government, longer horizon.
    KernelParams plain;
    plain.delta = 0.4;
    plain.sigma = 0.3;
    EngineConfig ec;
    ec.ticks = 5;
    ec.seed = 99;
    std::string report;
    CHECK(oracle::diff_engine(small_pop(24), plain, ec, &report) == 0);
}

TEST_CASE("boundedness diagnostics cover every tick") {
    KernelParams kp = campaign_params();
    kp.beta = 0.3;
    EngineConfig ec;
    ec.ticks = 150;
    ec.seed = 17;
    RunResult r = run(small_pop(60), kp, ec);
    CHECK(r.metrics.attr_min >= 0.0);
    CHECK(r.metrics.attr_max <= 1.0);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t k = 0; k < r.metrics.records(); ++k) {
            REQUIRE(r.metrics.mean[a][k] >= 0.0);
            REQUIRE(r.metrics.mean[a][k] <= 1.0);
            REQUIRE(r.metrics.variance[a][k] >= 0.0);
        }
}

TEST_CASE("fatigue makes mean government susceptibility non-increasing") {
    KernelParams kp = campaign_params();
    EngineConfig ec;
    ec.ticks = 100;
    ec.campaign_stop_tick = 60;
    ec.seed = 4;
    RunResult r = run(small_pop(60), kp, ec);
    REQUIRE(r.metrics.s_gov_mean.size() == 101);
    for (std::size_t t = 1; t < r.metrics.s_gov_mean.size(); ++t)
        REQUIRE(r.metrics.s_gov_mean[t] <= r.metrics.s_gov_mean[t - 1]);
    // Constant after the campaign halt.
    for (std::size_t t = 61; t < r.metrics.s_gov_mean.size(); ++t)
        REQUIRE(r.metrics.s_gov_mean[t] == r.metrics.s_gov_mean[60]);
    CHECK(r.metrics.s_gov_mean[60] < r.metrics.s_gov_mean[0]);
}

TEST_CASE("record cadence honours record_every") {
    EngineConfig ec;
    ec.ticks = 100;
    ec.record_every = 10;
    ec.seed = 8;
    RunResult r = run(small_pop(), KernelParams{}, ec);
    REQUIRE(r.metrics.records() == 11);
    CHECK(r.metrics.ticks.front() == 0);
    CHECK(r.metrics.ticks.back() == 100);
    for (std::size_t k = 1; k < r.metrics.records(); ++k)
        CHECK(r.metrics.ticks[k] == static_cast<std::int64_t>(k) * 10);
}

TEST_CASE("sweep cells decompose into independent runs") {
    std::vector<SweepCell> cells;
    for (double delta : {0.1, 0.3, 0.5}) {
        SweepCell c;
        c.label = "delta=" + std::to_string(delta);
        c.population = small_pop(36);
        c.kernels = campaign_params();
        c.kernels.delta = delta;
        c.engine.ticks = 30;
        cells.push_back(c);
    }
    std::vector<std::uint64_t> seeds{11, 12};
    auto summaries = run_sweep(cells, seeds, 2);
    REQUIRE(summaries.size() == 3);

    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(summaries[i].label == cells[i].label);
        CHECK(summaries[i].runs == 2);
        // Recompute one cell by hand from individual runs.
        std::array<double, 5> acc{};
        std::array<std::array<double, 2>, 5> net{};
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            EngineConfig ec = cells[i].engine;
            ec.seed = seeds[s];
            RunResult r = run(cells[i].population, cells[i].kernels, ec);
            for (std::size_t a = 0; a < 5; ++a) {
                double nc = r.metrics.net_change(a, r.metrics.records() - 1);
                acc[a] += nc;
                net[a][s] = nc;
            }
        }
        for (std::size_t a = 0; a < 5; ++a) {
            CHECK(summaries[i].net_mean[a] == doctest::Approx(acc[a] / 2).epsilon(1e-15));
            double m = acc[a] / 2;
            double sd = std::sqrt((net[a][0] - m) * (net[a][0] - m) +
                                  (net[a][1] - m) * (net[a][1] - m)); // n-1 = 1
            CHECK(summaries[i].net_sd[a] == doctest::Approx(sd).epsilon(1e-12));
        }
    }
}

TEST_CASE("sweep is invariant to thread count") {
    std::vector<SweepCell> cells;
    for (double zeta : {0.8, 1.2}) {
        SweepCell c;
        c.label = "zeta=" + std::to_string(zeta);
        c.population = small_pop(36);
        c.kernels = campaign_params();
        c.kernels.zeta = zeta;
        c.engine.ticks = 25;
        cells.push_back(c);
    }
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    auto a = run_sweep(cells, seeds, 1);
    auto b = run_sweep(cells, seeds, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].net_mean == b[i].net_mean);
        CHECK(a[i].net_sd == b[i].net_sd);
    }
}

TEST_CASE("sweep validation precedes execution") {
    std::vector<SweepCell> cells(1);
    cells[0].label = "ok";
    cells[0].population = small_pop(36);
    cells[0].engine.ticks = 5;

    std::vector<std::uint64_t> none;
    CHECK_THROWS_AS(run_sweep(cells, none), std::runtime_error);

    std::vector<std::uint64_t> seeds{1};
    cells[0].kernels.zeta = 2.0;
    CHECK_THROWS_AS(run_sweep(cells, seeds), std::runtime_error);
}

TEST_CASE("single-seed sweep reports zero dispersion") {
    std::vector<SweepCell> cells(1);
    cells[0].label = "one";
    cells[0].population = small_pop(36);
    cells[0].kernels = campaign_params();
    cells[0].engine.ticks = 10;
    std::vector<std::uint64_t> seeds{77};
    auto s = run_sweep(cells, seeds);
    REQUIRE(s.size() == 1);
    CHECK(s[0].runs == 1);
    for (double sd : s[0].net_sd) CHECK(sd == 0.0);
}
