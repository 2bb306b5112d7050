#pragma once

#include <iosfwd>

#include "quagd/config.hpp"

namespace quagd::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kConfigError = 2,
    kAssumptionViolation = 3,
    kNonTermination = 4,
};

/// Entry point shared by the executable and the tests.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes trace.csv, residual.svg and effective_config.ini (plus
/// consensus_trace.tsv with tracing on) into cfg.out_dir.
int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Writes one trace_delta_<Δ>.csv per level, sweep.csv, sweep.svg and
/// effective_config.ini. Nonzero only if every level fails.
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Prints the step-size interval, Young-parameter interval, θ, error floor
/// and asymptotic bound, then the same values as one JSON object.
int cmd_theory(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace quagd::cli
