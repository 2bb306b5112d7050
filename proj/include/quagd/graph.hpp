#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace quagd {

using NodeId = std::size_t;

/// A directed edge: `receiver` can hear `sender`.
struct Edge {
    NodeId receiver;
    NodeId sender;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed communication graph on nodes 0..n-1.
///
/// Every node implicitly owns a self-edge; self-edges are never stored, so
/// out_degree(j) counts distinct out-neighbors other than j.
class Digraph {
public:
    /// Throws std::invalid_argument for n < 2.
    explicit Digraph(std::size_t n);

    std::size_t size() const noexcept { return out_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Adds sender -> receiver. Returns false (and changes nothing) for
    /// duplicates and self-edges; throws std::out_of_range on bad ids.
    bool add_edge(Edge e);
    bool has_edge(Edge e) const;

    const std::vector<NodeId>& out_neighbors(NodeId j) const { return out_.at(j); }
    const std::vector<NodeId>& in_neighbors(NodeId j) const { return in_.at(j); }
    std::size_t out_degree(NodeId j) const { return out_.at(j).size(); }
    std::size_t in_degree(NodeId j) const { return in_.at(j).size(); }

    /// All stored edges ordered by (receiver, sender).
    std::vector<Edge> edges() const;

private:
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::size_t edge_count_ = 0;
};

bool is_strongly_connected(const Digraph& g);

/// Some ordered pair (from, to) with no directed path from -> to, if any.
std::optional<std::pair<NodeId, NodeId>> find_unreachable_pair(const Digraph& g);

/// Hop distances from `source` along directed edges; -1 marks unreachable.
std::vector<std::int64_t> bfs_distances(const Digraph& g, NodeId source);

/// Longest shortest directed path over ordered pairs of distinct nodes.
/// Throws AssumptionViolation if g is not strongly connected.
std::size_t diameter(const Digraph& g);

/// Plants a random Hamiltonian cycle, then adds every other ordered pair
/// independently with probability extra_edge_prob. Deterministic in seed.
Digraph generate_random_strongly_connected(std::size_t n, double extra_edge_prob,
                                           std::uint64_t seed);

Digraph directed_cycle(std::size_t n);
Digraph directed_path(std::size_t n);
Digraph bidirectional_path(std::size_t n);
Digraph complete_digraph(std::size_t n);

/// Edge-list text format: a header line `n <count>`, then one
/// `receiver sender` pair per line (0-based ids). Blank lines and lines
/// starting with '#' are ignored; self-edges are accepted and dropped.
/// Throws ConfigError with the offending line number.
Digraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Digraph& g);

} // namespace quagd
