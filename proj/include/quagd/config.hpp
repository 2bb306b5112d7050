#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quagd/cost.hpp"
#include "quagd/optimizer.hpp"

namespace quagd {

/// Experiment configuration as read from an INI-style file:
///
///     [graph]      nodes, edge_prob, file, d_bound
///     [quantizer]  delta, deltas
///     [optimizer]  alpha, max_iters, seed, max_rounds, x_star, x0
///     [costs]      node.<i> = {type: "quadratic", beta: 1, center: 2}
///     [theory]     mu, lipschitz, young_delta
///     [output]     dir, trace
///
/// Empty values leave optional fields unset. Lines starting with '#' or ';'
/// are comments.
struct ExperimentConfig {
    std::size_t nodes = 20;
    double edge_prob = 0.2;
    std::string graph_file;
    std::size_t d_bound = 0;

    std::string delta = "0.01";
    std::vector<std::string> deltas = {"0.1", "0.01", "0.001"};

    std::optional<double> alpha;
    std::size_t max_iters = 60;
    std::uint64_t seed = 42;
    std::int64_t max_rounds = 0;
    std::optional<double> x_star;
    std::vector<double> x0;

    std::map<std::size_t, CostRecord> costs;

    std::optional<double> theory_mu;
    std::optional<double> theory_lipschitz;
    std::optional<double> theory_young_delta;

    std::string out_dir = "out";
    bool trace = false;
};

/// Throws ConfigError as "<source>:<line>: <message>".
ExperimentConfig parse_config(std::istream& in, std::string_view source = "config");

/// Fully resolved, re-parsable text form.
std::string format_config(const ExperimentConfig& cfg);

/// Loads the graph (from file or generator), the per-node costs (reference
/// quadratics when none are given), x0 (U[0,10] when none are given), α
/// (interval midpoint when unset) and x* (closed form for quadratics). The
/// result carries every generated value explicitly, so formatting and
/// re-parsing it reproduces the same run.
ExperimentConfig resolve(ExperimentConfig cfg);

/// Graph described by a configuration (file or seeded generator).
Digraph load_graph(const ExperimentConfig& cfg);

/// Builds the simulator configuration from a resolved config at the given Δ.
OptRunConfig to_run_config(const ExperimentConfig& resolved, std::string_view delta);

std::vector<double> parse_number_list(std::string_view text);

} // namespace quagd
