#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "quagd/graph.hpp"
#include "quagd/quantizer.hpp"
#include "quagd/rng.hpp"

namespace quagd {

/// Integer numerator/denominator mass. z counts unit pieces.
struct MassPair {
    std::int64_t y = 0;
    std::int64_t z = 0;

    friend bool operator==(const MassPair&, const MassPair&) = default;
};

/// Mass carried along one edge in one round.
struct MassMessage {
    NodeId sender = 0;
    NodeId receiver = 0;
    std::int64_t c_y = 0;
    std::int64_t c_z = 0;

    friend bool operator==(const MassMessage&, const MassMessage&) = default;
};

/// Per-node protocol state.
///
/// (y, z) is the transferable mass, (y_s, z_s, q_s) the last refreshed
/// snapshot of its ratio, and (M, m) the flooded max/min used for stopping.
/// `destinations` lists the node itself first, then its out-neighbors;
/// `out_probs[i]` is the probability of sending a piece to destinations[i].
struct ConsensusNodeState {
    std::int64_t y = 0;
    std::int64_t z = 0;
    std::int64_t y_s = 0;
    std::int64_t z_s = 1;
    std::int64_t q_s = 0;
    std::int64_t M = 0;
    std::int64_t m = 0;
    std::vector<NodeId> destinations;
    std::vector<double> out_probs;
};

/// Quantizes x_half and sets z = 2, y = 2⌊x_half/Δ⌋ with matching state
/// variables. Throws std::invalid_argument if x_half.size() != g.size().
std::vector<ConsensusNodeState> init_consensus(std::span<const double> x_half, const Digraph& g,
                                               QuantizationLevel q);

/// Same, starting from already quantized counts ⌊x_half/Δ⌋.
std::vector<ConsensusNodeState> init_consensus_counts(std::span<const std::int64_t> counts,
                                                      const Digraph& g);

/// The z unit pieces of mass y: r = y − z⌊y/z⌋ pieces of ⌊y/z⌋ + 1 and the
/// rest of ⌊y/z⌋. Element 0 is the piece the node keeps, always of minimum
/// value. Throws std::invalid_argument for z < 2.
std::vector<std::int64_t> split_pieces(std::int64_t y, std::int64_t z);

struct SplitResult {
    MassPair kept;
    std::vector<MassMessage> outgoing;  ///< one per out-neighbor with c_z > 0
};

/// Keeps one minimum piece and sends each of the other z − 1 pieces to a
/// destination drawn uniformly from `destinations` (self first). Mass is
/// conserved exactly across kept + outgoing.
SplitResult split_mass(NodeId self, MassPair mass, std::span<const NodeId> destinations, Rng& rng);

/// Eqs. for the receive step: kept piece plus everything that arrived.
MassPair merge_masses(MassPair kept, std::span<const MassMessage> inbox);

struct Extrema {
    std::int64_t max = 0;
    std::int64_t min = 0;

    friend bool operator==(const Extrema&, const Extrema&) = default;
};

/// One synchronous max/min consensus step: every node takes the max/min over
/// itself and its in-neighbors.
std::vector<Extrema> flood_extrema(const Digraph& g, std::span<const Extrema> current);

/// Window bookkeeping with 1-based round index lambda and window length
/// `window`: rounds 1, window+1, 2·window+1, ... open a window, rounds that
/// are multiples of `window` close it.
constexpr bool opens_window(std::int64_t lambda, std::int64_t window) noexcept {
    return (lambda - 1) % window == 0;
}
constexpr bool closes_window(std::int64_t lambda, std::int64_t window) noexcept {
    return lambda % window == 0;
}

/// Reseeds M = ⌈y_s/z_s⌉, m = ⌊y_s/z_s⌋ when lambda opens a window, then
/// performs one flooding step.
void minmax_window_round(std::span<ConsensusNodeState> states, const Digraph& g, std::int64_t lambda,
                         std::int64_t window);

struct ConservationViolation {
    std::int64_t round = 0;
    std::int64_t y_total = 0;
    std::int64_t z_total = 0;
    std::int64_t y_expected = 0;
    std::int64_t z_expected = 0;
};

struct FaquaOptions {
    std::uint64_t master_seed = 0;
    std::uint64_t outer_step = 0;
    /// 0 selects the default budget of 200·D·n rounds.
    std::int64_t max_rounds = 0;
    /// Check Σ kept + Σ in-flight against the initial totals after every send phase.
    bool audit = false;
    /// Tab-separated per-round trace: `lambda node y z y_s z_s M m`, then `RESULT value rounds`.
    std::ostream* trace = nullptr;
    /// Test hook: may mutate the in-flight messages of a round before delivery.
    std::function<void(std::int64_t round, std::vector<MassMessage>& in_flight)> tamper;
    /// Called after initialization (round 0) and at the end of every round.
    std::function<void(std::int64_t round, std::span<const ConsensusNodeState> states)> on_round;
};

struct ConsensusResult {
    double value = 0.0;                ///< m·Δ, common to all nodes
    std::int64_t value_count = 0;      ///< m
    std::int64_t rounds_used = 0;      ///< λ at the stopping check
    std::vector<double> per_node_values;
    std::int64_t quantized_sum = 0;    ///< Σ_i ⌊x_half_i/Δ⌋
    std::vector<ConservationViolation> conservation_violations;
};

/// Raised when the round budget runs out before the stopping condition.
/// Carries the node states at the last completed round.
class ConsensusNonTermination : public std::runtime_error {
public:
    ConsensusNonTermination(std::int64_t rounds, std::vector<ConsensusNodeState> snapshot);

    std::int64_t rounds() const noexcept { return rounds_; }
    const std::vector<ConsensusNodeState>& snapshot() const noexcept { return snapshot_; }

private:
    std::int64_t rounds_;
    std::vector<ConsensusNodeState> snapshot_;
};

/// Runs the finite-time quantized averaging protocol to its distributed stop.
///
/// `window` is the diameter bound D' used for window length and check
/// cadence; it must be at least diameter(g) (AssumptionViolation otherwise).
/// Node j draws from the stream stream_seed(master_seed, j, outer_step).
ConsensusResult run_faqua(std::span<const double> x_half, const Digraph& g, std::size_t window,
                          QuantizationLevel q, const FaquaOptions& options = {});

/// Integer-input form: counts are the already quantized ⌊x_half/Δ⌋.
ConsensusResult run_faqua_counts(std::span<const std::int64_t> counts, const Digraph& g,
                                 std::size_t window, QuantizationLevel q,
                                 const FaquaOptions& options = {});

} // namespace quagd
