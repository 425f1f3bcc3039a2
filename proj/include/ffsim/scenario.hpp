#pragma once

#include <string>
#include <vector>

#include "ffsim/engine.hpp"
#include "ffsim/influence.hpp"
#include "ffsim/population.hpp"

namespace ffsim {

/// File names (relative to the chosen output directory) of the five
/// artifacts one run emits.
struct OutputSpec {
    std::string timeseries_csv = "timeseries.csv";
    std::string final_snapshot_csv = "snapshot.csv";
    std::string histogram_csv = "histogram.csv";
    std::string svg_lines = "series.svg";
    std::string svg_histogram = "histogram.svg";

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// One fully resolved simulation setup: everything run() needs plus where
/// the results go.
struct ScenarioConfig {
    PopulationSpec population;
    KernelParams kernels;
    EngineConfig engine;
    OutputSpec outputs;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parse product of a config file. The five mechanism parameters are sweep
/// axes and may carry several values each; everything else is single-valued.
/// `base` holds the scalar fields; its kernel axis fields are filled from
/// the first value of each axis during expansion.
struct ScenarioDoc {
    ScenarioConfig base;
    std::vector<double> delta = {0.05};
    std::vector<double> tau;  // empty = non-polarized mode
    std::vector<double> sigma = {0.05};
    std::vector<double> beta = {0.0};
    std::vector<double> zeta; // empty = no government

    friend bool operator==(const ScenarioDoc&, const ScenarioDoc&) = default;
};

/// A single point of the expanded grid. The label encodes the multi-valued
/// axes ("delta=0.3" or "beta=-0.3_zeta=1.2"); it is empty when the doc has
/// exactly one cell, and is safe to use as a directory name.
struct NamedCell {
    std::string label;
    ScenarioConfig config;
};

/// Parses the key-value config format (see README for the schema). Throws
/// std::runtime_error with a line number on malformed input and with the
/// offending key plus permitted range on out-of-range values. A `preset`
/// key, if used, must be the first key; later keys override preset values.
ScenarioDoc parse_config(const std::string& text);

/// parse_config over a file's contents.
ScenarioDoc parse_config_file(const std::string& path);

/// Renders a doc back to config text; parse_config(format_config(d)) == d.
std::string format_config(const ScenarioDoc& doc);

/// The 13 frozen study setups, A1 through C5.
const std::vector<std::string>& preset_names();

/// Catalog lookup; throws std::runtime_error for unknown names.
ScenarioDoc preset_doc(const std::string& name);

/// Cross product of the sweep axes in fixed order (delta, tau, sigma, beta,
/// zeta). Every returned cell is fully validated.
std::vector<NamedCell> expand_cells(const ScenarioDoc& doc);

} // namespace ffsim
