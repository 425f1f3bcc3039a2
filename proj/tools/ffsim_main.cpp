#include <CLI11.hpp>

#include "ffsim/engine.hpp"
#include "ffsim/kernels.hpp"
#include "ffsim/outputs.hpp"
#include "ffsim/scenario.hpp"

#include "oracle.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace ffsim;

void apply_axis_override(ScenarioDoc& doc, const std::string& spec) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
        throw std::runtime_error("--param expects key=v1,v2,... (got '" + spec + "')");
    }
    std::string key = spec.substr(0, eq);
    if (key.rfind("kernels.", 0) == 0) {
        key = key.substr(8);
    }
    std::string rest = spec.substr(eq + 1);
    if (rest.empty()) {
        throw std::runtime_error("--param " + key + ": no values given");
    }

    std::vector<double> values;
    bool none = rest == "none";
    if (!none) {
        std::size_t pos = 0;
        while (pos != std::string::npos) {
            std::size_t comma = rest.find(',', pos);
            std::string item = rest.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            double v = std::strtod(item.c_str(), &end);
            if (item.empty() || end != item.c_str() + item.size()) {
                throw std::runtime_error("--param " + key + ": bad value '" + item + "'");
            }
            values.push_back(v);
            pos = comma == std::string::npos ? comma : comma + 1;
        }
    }

    if (key == "delta") {
        doc.delta = values;
    } else if (key == "tau") {
        doc.tau = values;
    } else if (key == "sigma") {
        doc.sigma = values;
    } else if (key == "beta") {
        doc.beta = values;
    } else if (key == "zeta") {
        doc.zeta = values;
    } else {
        throw std::runtime_error("--param supports delta, tau, sigma, beta, zeta (got '" +
                                 key + "')");
    }
    if ((key == "delta" || key == "sigma" || key == "beta") && values.empty()) {
        throw std::runtime_error("--param " + key + " cannot be 'none'");
    }
}

int cmd_run(const std::string& cfg_path, const std::string& out_dir,
            bool have_seed, std::uint64_t seed, const std::string& backend) {
    ScenarioDoc doc = parse_config_file(cfg_path);
    if (have_seed) {
        doc.base.engine.seed = seed;
    }
    if (!backend.empty()) {
        doc.base.engine.backend = backend;
    }
    std::vector<NamedCell> cells = expand_cells(doc);
    for (const NamedCell& cell : cells) {
        RunResult r = run(cell.config.population, cell.config.kernels, cell.config.engine);
        std::string dir = out_dir;
        if (cells.size() > 1) {
            dir = (std::filesystem::path(out_dir) / cell.label).string();
        }
        emit_outputs(r.metrics, r.agents, cell.config.outputs, dir);
        std::size_t last = r.metrics.records() - 1;
        std::printf("%s: %zu agents, %lld ticks -> %s (final mean purchase_prob %.4f, net %+.4f)\n",
                    cell.label.empty() ? "run" : cell.label.c_str(), r.agents.size(),
                    static_cast<long long>(cell.config.engine.ticks), dir.c_str(),
                    r.metrics.mean[4][last], r.metrics.net_change(4, last));
    }
    return 0;
}

int cmd_sweep(const std::string& cfg_path, const std::vector<std::string>& params,
              std::size_t n_seeds, const std::string& out_dir, unsigned threads,
              bool have_seed, std::uint64_t seed, const std::string& backend) {
    ScenarioDoc doc = parse_config_file(cfg_path);
    if (have_seed) {
        doc.base.engine.seed = seed;
    }
    if (!backend.empty()) {
        doc.base.engine.backend = backend;
    }
    for (const std::string& p : params) {
        apply_axis_override(doc, p);
    }
    std::vector<NamedCell> named = expand_cells(doc);
    std::vector<SweepCell> cells;
    cells.reserve(named.size());
    for (NamedCell& nc : named) {
        cells.push_back({nc.label.empty() ? "base" : nc.label, nc.config.population,
                         nc.config.kernels, nc.config.engine});
    }
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        seeds.push_back(doc.base.engine.seed + i);
    }
    std::vector<CellSummary> summary = run_sweep(cells, seeds, threads);

    std::string csv = render_sweep_summary_csv(summary);
    std::string path = (std::filesystem::path(out_dir) / "sweep_summary.csv").string();
    write_file(path, csv);
    std::printf("%zu cells x %zu seeds -> %s\n", cells.size(), seeds.size(), path.c_str());
    std::fputs(csv.c_str(), stdout);
    return 0;
}

int cmd_oracle_check(std::size_t agents, std::int64_t ticks, std::uint64_t seed,
                     const std::string& backend) {
    std::size_t n = agents;
    if (n < 18) {
        n = 18;
    }
    if (n % 6 != 0) {
        n += 6 - n % 6;
    }
    if (n != agents) {
        std::fprintf(stderr,
                     "note: agent count raised from %zu to %zu (the synthetic graph "
                     "needs a multiple of 6, at least 18)\n",
                     agents, n);
    }
    PopulationSpec pop;
    pop.n_agents = n;
    KernelParams kp;
    kp.delta = 0.3;
    kp.tau = 0.15;
    kp.sigma = 0.25;
    kp.beta = 0.1;
    kp.zeta = 1.2;
    EngineConfig ec;
    ec.ticks = ticks;
    ec.seed = seed;
    if (!backend.empty()) {
        ec.backend = backend;
    }

    std::string report;
    std::size_t bad = oracle::diff_engine(pop, kp, ec, &report);
    if (bad != 0) {
        std::fprintf(stderr, "oracle-check FAILED: %zu mismatching states; %s\n", bad,
                     report.c_str());
        return 2;
    }
    std::printf("oracle-check OK: %zu agents, %lld ticks, seed %llu, backend %s — "
                "engine matches the reference bit for bit\n",
                n, static_cast<long long>(ticks),
                static_cast<unsigned long long>(seed),
                select_batch(ec.backend) ? select_batch(ec.backend)->name : "?");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ffsim — agent-based fast-fashion opinion dynamics simulator"};
    app.require_subcommand(1);

    std::string cfg_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::string backend;

    CLI::App* run_cmd =
        app.add_subcommand("run", "run a config (multi-valued axes expand to cells)");
    run_cmd->add_option("--config", cfg_path, "config file")->required();
    CLI::Option* run_seed = run_cmd->add_option("--seed", seed, "override engine.seed");
    run_cmd->add_option("--out", out_dir, "output directory (default: out)");
    run_cmd->add_option("--kernels", backend, "kernel backend: scalar|avx2|auto")
        ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

    CLI::App* preset_cmd = app.add_subcommand("preset", "inspect the built-in presets");
    bool list = false;
    std::string show;
    preset_cmd->add_flag("--list", list, "print the preset names");
    preset_cmd->add_option("--show", show, "print one preset as config text");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a parameter grid over several seeds");
    std::vector<std::string> params;
    std::size_t n_seeds = 1;
    unsigned threads = 0;
    sweep_cmd->add_option("--config", cfg_path, "config file")->required();
    sweep_cmd->add_option("--param", params,
                          "axis override key=v1,v2,... (delta, tau, sigma, beta, zeta)");
    sweep_cmd->add_option("--seeds", n_seeds, "number of seeds (engine.seed, +1, ...)");
    CLI::Option* sweep_seed =
        sweep_cmd->add_option("--seed", seed, "override the base seed");
    sweep_cmd->add_option("--out", out_dir, "output directory (default: out)");
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    sweep_cmd->add_option("--kernels", backend, "kernel backend: scalar|avx2|auto")
        ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle-check", "diff the engine against the brute-force reference");
    std::size_t agents = 18;
    std::int64_t ticks = 3;
    std::uint64_t oc_seed = 1;
    oracle_cmd->add_option("--agents", agents, "population size (default 18)");
    oracle_cmd->add_option("--ticks", ticks, "ticks to simulate (default 3)");
    oracle_cmd->add_option("--seed", oc_seed, "seed (default 1)");
    oracle_cmd->add_option("--kernels", backend, "kernel backend: scalar|avx2|auto")
        ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(cfg_path, out_dir, run_seed->count() > 0, seed, backend);
        }
        if (preset_cmd->parsed()) {
            if (list != show.empty()) { // exactly one of --list / --show
                std::fprintf(stderr, "preset: use exactly one of --list or --show NAME\n");
                return 1;
            }
            if (list) {
                for (const std::string& name : preset_names()) {
                    std::printf("%s\n", name.c_str());
                }
            } else {
                std::printf("# preset %s\n%s", show.c_str(),
                            format_config(preset_doc(show)).c_str());
            }
            return 0;
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(cfg_path, params, n_seeds, out_dir, threads,
                             sweep_seed->count() > 0, seed, backend);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle_check(agents, ticks, oc_seed, backend);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
