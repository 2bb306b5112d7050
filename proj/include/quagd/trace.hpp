#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "quagd/consensus.hpp"

namespace quagd {

/// One outer iteration k. Entries for k = 0 hold the initial estimates only.
struct TraceStep {
    std::size_t k = 0;
    std::vector<double> estimates;  ///< x_i^{[k]}
    std::vector<double> stepped;    ///< gradient-stepped values that produced x^{[k]}; empty at k = 0
    std::int64_t inner_rounds = 0;
    std::int64_t consensus_count = 0;  ///< m such that x^{[k]} = m·Δ
    std::int64_t quantized_sum = 0;    ///< Σ_i ⌊stepped_i / Δ⌋
    std::vector<ConservationViolation> conservation_violations;

    // Observer-side diagnostics, filled by the harness from global state.
    double residual = std::numeric_limits<double>::quiet_NaN();
    double centroid_err = 0.0;  ///< |x̂ − ẑ|
    double max_node_dev = 0.0;  ///< max_i |x_i − x̂|
};

struct RunTrace {
    double delta = 0.0;  ///< Δ, or 0 for unquantized runs
    std::size_t nodes = 0;
    bool quantized = true;
    std::vector<TraceStep> steps;

    std::vector<double> residuals() const {
        std::vector<double> out;
        out.reserve(steps.size());
        for (const auto& s : steps) out.push_back(s.residual);
        return out;
    }
};

} // namespace quagd
