#include "quagd/consensus.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <string>

#include "quagd/errors.hpp"

namespace quagd {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

MassPair totals(std::span<const MassPair> kept, std::span<const MassMessage> in_flight) {
    MassPair sum;
    for (const auto& k : kept) {
        sum.y += k.y;
        sum.z += k.z;
    }
    for (const auto& msg : in_flight) {
        sum.y += msg.c_y;
        sum.z += msg.c_z;
    }
    return sum;
}

} // namespace

std::vector<ConsensusNodeState> init_consensus_counts(std::span<const std::int64_t> counts, const Digraph& g) {
    if (counts.size() != g.size()) throw std::invalid_argument("one input value per node required");

    std::vector<ConsensusNodeState> states(g.size());
    for (NodeId j = 0; j < g.size(); ++j) {
        auto& s = states[j];
        s.z = 2;
        s.y = 2 * counts[j];
        s.y_s = s.y;
        s.z_s = s.z;
        s.q_s = floor_div(s.y_s, s.z_s);

        s.destinations.reserve(g.out_degree(j) + 1);
        s.destinations.push_back(j);
        for (NodeId l : g.out_neighbors(j)) s.destinations.push_back(l);
        s.out_probs.assign(s.destinations.size(), 1.0 / static_cast<double>(s.destinations.size()));
    }
    return states;
}

std::vector<ConsensusNodeState> init_consensus(std::span<const double> x_half, const Digraph& g,
                                               QuantizationLevel q) {
    std::vector<std::int64_t> counts(x_half.size());
    std::transform(x_half.begin(), x_half.end(), counts.begin(),
                   [q](double x) { return quantize_floor(x, q); });
    return init_consensus_counts(counts, g);
}

std::vector<std::int64_t> split_pieces(std::int64_t y, std::int64_t z) {
    if (z < 2) throw std::invalid_argument("split_pieces requires z >= 2");
    const std::int64_t base = floor_div(y, z);
    const std::int64_t remainder = y - base * z;  // in [0, z)

    // Pieces of value base + 1 go last so element 0 is always a minimum piece.
    std::vector<std::int64_t> pieces(static_cast<std::size_t>(z), base);
    std::fill(pieces.end() - remainder, pieces.end(), base + 1);
    return pieces;
}

SplitResult split_mass(NodeId self, MassPair mass, std::span<const NodeId> destinations, Rng& rng) {
    if (destinations.empty() || destinations.front() != self) {
        throw std::invalid_argument("destinations must start with the sending node");
    }
    const auto pieces = split_pieces(mass.y, mass.z);

    std::vector<MassPair> bundles(destinations.size());
    bundles[0] = {pieces[0], 1};
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        auto& b = bundles[rng.uniform_index(destinations.size())];
        b.y += pieces[i];
        b.z += 1;
    }

    SplitResult result;
    result.kept = bundles[0];
    for (std::size_t d = 1; d < destinations.size(); ++d) {
        if (bundles[d].z > 0) {
            result.outgoing.push_back({self, destinations[d], bundles[d].y, bundles[d].z});
        }
    }
    return result;
}

MassPair merge_masses(MassPair kept, std::span<const MassMessage> inbox) {
    for (const auto& msg : inbox) {
        kept.y += msg.c_y;
        kept.z += msg.c_z;
    }
    return kept;
}

std::vector<Extrema> flood_extrema(const Digraph& g, std::span<const Extrema> current) {
    std::vector<Extrema> next(current.begin(), current.end());
    for (NodeId j = 0; j < g.size(); ++j) {
        for (NodeId i : g.in_neighbors(j)) {
            next[j].max = std::max(next[j].max, current[i].max);
            next[j].min = std::min(next[j].min, current[i].min);
        }
    }
    return next;
}

void minmax_window_round(std::span<ConsensusNodeState> states, const Digraph& g, std::int64_t lambda,
                         std::int64_t window) {
    if (opens_window(lambda, window)) {
        for (auto& s : states) {
            s.M = ceil_div(s.y_s, s.z_s);
            s.m = floor_div(s.y_s, s.z_s);
        }
    }
    std::vector<Extrema> current(states.size());
    std::transform(states.begin(), states.end(), current.begin(),
                   [](const ConsensusNodeState& s) { return Extrema{s.M, s.m}; });
    const auto next = flood_extrema(g, current);
    for (std::size_t j = 0; j < states.size(); ++j) {
        states[j].M = next[j].max;
        states[j].m = next[j].min;
    }
}

ConsensusNonTermination::ConsensusNonTermination(std::int64_t rounds, std::vector<ConsensusNodeState> snapshot)
    : std::runtime_error("quantized averaging did not stop within " + std::to_string(rounds) + " rounds"),
      rounds_(rounds),
      snapshot_(std::move(snapshot)) {}

ConsensusResult run_faqua_counts(std::span<const std::int64_t> counts, const Digraph& g, std::size_t window,
                                 QuantizationLevel q, const FaquaOptions& options) {
    const std::size_t n = g.size();
    if (window < 1) throw AssumptionViolation("diameter bound must be at least 1");
    if (const auto d = diameter(g); window < d) {
        throw AssumptionViolation("diameter bound " + std::to_string(window) + " is below the graph diameter " +
                                  std::to_string(d));
    }
    const auto D = static_cast<std::int64_t>(window);
    const std::int64_t budget =
        options.max_rounds > 0 ? options.max_rounds : 200 * D * static_cast<std::int64_t>(n);

    auto states = init_consensus_counts(counts, g);

    ConsensusResult result;
    result.quantized_sum = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    const MassPair expected{2 * result.quantized_sum, 2 * static_cast<std::int64_t>(n)};

    std::vector<Rng> rngs;
    rngs.reserve(n);
    for (NodeId j = 0; j < n; ++j) rngs.emplace_back(stream_seed(options.master_seed, j, options.outer_step));

    std::vector<MassPair> kept(n);
    std::vector<MassMessage> in_flight;

    auto finish_send_phase = [&](std::int64_t round) {
        if (options.tamper) options.tamper(round, in_flight);
        if (options.audit) {
            const auto sum = totals(kept, in_flight);
            if (sum != expected) {
                result.conservation_violations.push_back({round, sum.y, sum.z, expected.y, expected.z});
            }
        }
    };

    // Initialization send: all mass goes to one random destination.
    for (NodeId j = 0; j < n; ++j) {
        auto& s = states[j];
        const NodeId dest = s.destinations[rngs[j].uniform_index(s.destinations.size())];
        if (dest == j) {
            kept[j] = {s.y, s.z};
        } else {
            in_flight.push_back({j, dest, s.y, s.z});
        }
    }
    finish_send_phase(0);
    if (options.on_round) options.on_round(0, states);

    std::vector<std::vector<MassMessage>> inbox(n);
    for (std::int64_t lambda = 1; lambda <= budget; ++lambda) {
        for (auto& box : inbox) box.clear();
        for (const auto& msg : in_flight) inbox[msg.receiver].push_back(msg);
        in_flight.clear();
        for (NodeId j = 0; j < n; ++j) {
            const auto merged = merge_masses(kept[j], inbox[j]);
            states[j].y = merged.y;
            states[j].z = merged.z;
        }

        minmax_window_round(states, g, lambda, D);

        for (NodeId j = 0; j < n; ++j) {
            auto& s = states[j];
            if (options.trace) {
                *options.trace << lambda << '\t' << j << '\t' << s.y << '\t' << s.z << '\t' << s.y_s << '\t'
                               << s.z_s << '\t' << s.M << '\t' << s.m << '\n';
            }
            if (s.z > 1) {
                s.y_s = s.y;
                s.z_s = s.z;
                s.q_s = floor_div(s.y_s, s.z_s);
                auto split = split_mass(j, {s.y, s.z}, s.destinations, rngs[j]);
                kept[j] = split.kept;
                in_flight.insert(in_flight.end(), split.outgoing.begin(), split.outgoing.end());
            } else {
                kept[j] = {s.y, s.z};
            }
        }
        finish_send_phase(lambda);
        if (options.on_round) options.on_round(lambda, states);

        if (closes_window(lambda, D)) {
            const auto stopped = std::count_if(states.begin(), states.end(),
                                               [](const ConsensusNodeState& s) { return s.M - s.m <= 1; });
            if (stopped == 0) continue;
            if (static_cast<std::size_t>(stopped) != n) {
                throw std::logic_error("nodes disagree on the stopping condition");
            }
            result.value_count = states.front().m;
            result.value = dequantize(result.value_count, q);
            result.rounds_used = lambda;
            result.per_node_values.reserve(n);
            for (const auto& s : states) result.per_node_values.push_back(dequantize(s.m, q));
            if (options.trace) {
                *options.trace << "RESULT\t" << format_double(result.value) << '\t' << lambda << '\n';
            }
            return result;
        }
    }
    throw ConsensusNonTermination(budget, std::move(states));
}

ConsensusResult run_faqua(std::span<const double> x_half, const Digraph& g, std::size_t window,
                          QuantizationLevel q, const FaquaOptions& options) {
    std::vector<std::int64_t> counts(x_half.size());
    std::transform(x_half.begin(), x_half.end(), counts.begin(),
                   [q](double x) { return quantize_floor(x, q); });
    return run_faqua_counts(counts, g, window, q, options);
}

} // namespace quagd
