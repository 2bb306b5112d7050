#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quagd/harness.hpp"
#include "quagd/trace.hpp"

namespace quagd {

/// Shortest round-trip decimal text.
std::string format_number(double v);

/// `k,residual,inner_rounds,centroid_err,max_node_dev`
void write_trace_csv(std::ostream& out, const RunTrace& trace);

/// `delta,plateau,iters_to_plateau,theory_floor`
void write_sweep_csv(std::ostream& out, const SweepReport& report);

struct PlotSeries {
    std::string label;
    std::vector<double> values;  ///< one value per iteration k
};

/// Residual-vs-iteration line plot with a log10 y axis. Non-positive values
/// are clamped to the smallest positive value in the plot.
void write_log_plot_svg(std::ostream& out, const std::vector<PlotSeries>& series, const std::string& title);

} // namespace quagd
