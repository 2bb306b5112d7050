#include "quagd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quagd/errors.hpp"
#include "quagd/theory.hpp"

namespace quagd {

double gradient_step(double x, double alpha, const CostFunction& f) { return x - alpha * f.gradient(x); }

void validate(const OptRunConfig& cfg) {
    const std::size_t n = cfg.graph.size();
    if (cfg.costs.size() != n) {
        throw ConfigError("expected " + std::to_string(n) + " cost functions, got " + std::to_string(cfg.costs.size()));
    }
    if (cfg.x0.size() != n) {
        throw ConfigError("expected " + std::to_string(n) + " initial estimates, got " + std::to_string(cfg.x0.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!cfg.costs[i]) throw ConfigError("missing cost function for node " + std::to_string(i));
        if (!std::isfinite(cfg.x0[i]) || cfg.x0[i] < 0.0) {
            throw ConfigError("initial estimate of node " + std::to_string(i) + " must be finite and nonnegative");
        }
    }
    if (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0) throw ConfigError("step size must be finite and nonnegative");
    if (auto pair = find_unreachable_pair(cfg.graph)) {
        throw AssumptionViolation("digraph is not strongly connected: no directed path from node " +
                                  std::to_string(pair->first) + " to node " + std::to_string(pair->second));
    }
    if (cfg.d_bound != 0 && cfg.d_bound < diameter(cfg.graph)) {
        throw AssumptionViolation("diameter bound " + std::to_string(cfg.d_bound) + " is below the graph diameter " +
                                  std::to_string(diameter(cfg.graph)));
    }
}

std::size_t effective_d_bound(const OptRunConfig& cfg) {
    return cfg.d_bound != 0 ? cfg.d_bound : diameter(cfg.graph);
}

bool alpha_in_interval(const OptRunConfig& cfg) {
    const auto sums = summed_constants(cfg.costs);
    const auto interval =
        step_size_interval(sums.lipschitz, sums.strong_convexity, static_cast<double>(cfg.graph.size()));
    return interval.contains(cfg.alpha);
}

OuterStepNonTermination::OuterStepNonTermination(std::size_t outer_step, const ConsensusNonTermination& inner)
    : ConsensusNonTermination(inner.rounds(), inner.snapshot()),
      outer_step_(outer_step),
      message_(std::string(inner.what()) + " at outer step " + std::to_string(outer_step)) {}

RunTrace quagd_run(const OptRunConfig& cfg) {
    validate(cfg);
    const std::size_t n = cfg.graph.size();
    const std::size_t window = effective_d_bound(cfg);

    RunTrace trace;
    trace.delta = cfg.delta.value();
    trace.nodes = n;
    trace.steps.reserve(cfg.max_iters + 1);

    TraceStep initial;
    initial.estimates = cfg.x0;
    trace.steps.push_back(std::move(initial));

    FaquaOptions options;
    options.master_seed = cfg.seed;
    options.max_rounds = cfg.max_rounds;
    options.audit = cfg.audit;
    options.trace = cfg.consensus_trace;

    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        const auto& x = trace.steps.back().estimates;
        std::vector<double> stepped(n);
        for (std::size_t i = 0; i < n; ++i) stepped[i] = gradient_step(x[i], cfg.alpha, *cfg.costs[i]);

        options.outer_step = k;
        if (cfg.tamper) {
            options.tamper = [&cfg, k](std::int64_t round, std::vector<MassMessage>& in_flight) {
                cfg.tamper(k, round, in_flight);
            };
        }
        ConsensusResult consensus;
        try {
            consensus = run_faqua(stepped, cfg.graph, window, cfg.delta, options);
        } catch (const ConsensusNonTermination& e) {
            throw OuterStepNonTermination(k, e);
        }

        TraceStep step;
        step.k = k + 1;
        step.estimates = std::move(consensus.per_node_values);
        step.stepped = std::move(stepped);
        step.inner_rounds = consensus.rounds_used;
        step.consensus_count = consensus.value_count;
        step.quantized_sum = consensus.quantized_sum;
        step.conservation_violations = std::move(consensus.conservation_violations);
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

} // namespace quagd
