#pragma once

#include <array>
#include <span>
#include <string>

#include "ffsim/engine.hpp"
#include "ffsim/model.hpp"
#include "ffsim/scenario.hpp"

namespace ffsim {

/// Histogram of final purchase probabilities: 20 bins of width 0.05 over
/// [0, 1]; a value lands in bin min(19, floor(p / 0.05)).
std::array<std::size_t, 20> purchase_histogram(std::span<const AgentState> agents);

// The renderers build entire documents in memory; numbers are printed with
// enough digits to round-trip, so identical runs give identical bytes.

/// `tick,attr,mean,variance,net_change` rows, grouped by attribute in
/// series order.
std::string render_timeseries_csv(const MetricsSeries& ms);

/// One agent per row:
/// `id,sex,age,env,exp,wca,know,trust,access,freq,s_pp,s_sm,s_gov,purchase_prob`.
std::string render_snapshot_csv(std::span<const AgentState> agents);

/// `bin_lo,bin_hi,count` over the 20 purchase-probability bins.
std::string render_histogram_csv(std::span<const AgentState> agents);

/// Static SVG with two panels: net change of each tracked mean over time,
/// and the corresponding variances.
std::string render_svg_lines(const MetricsSeries& ms);

/// Static SVG bar chart of the final purchase-probability distribution.
std::string render_svg_histogram(std::span<const AgentState> agents);

/// Sweep aggregation table: `cell,runs,attr,net_change_mean,net_change_sd`.
std::string render_sweep_summary_csv(std::span<const CellSummary> cells);

/// Writes content to path, creating parent directories. A partially
/// written file is removed before the error is rethrown.
void write_file(const std::string& path, const std::string& content);

/// Renders and writes the five per-run artifacts into out_dir.
void emit_outputs(const MetricsSeries& ms, std::span<const AgentState> agents,
                  const OutputSpec& spec, const std::string& out_dir);

} // namespace ffsim
