#include "quagd/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "quagd/errors.hpp"
#include "quagd/rng.hpp"

namespace quagd {

namespace {

bool insert_sorted(std::vector<NodeId>& v, NodeId id) {
    auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it != v.end() && *it == id) return false;
    v.insert(it, id);
    return true;
}

} // namespace

Digraph::Digraph(std::size_t n) : out_(n), in_(n) {
    if (n < 2) throw std::invalid_argument("digraph needs at least 2 nodes");
}

bool Digraph::add_edge(Edge e) {
    if (e.receiver >= size() || e.sender >= size()) {
        throw std::out_of_range("edge endpoint out of range");
    }
    if (e.receiver == e.sender) return false;
    if (!insert_sorted(out_[e.sender], e.receiver)) return false;
    insert_sorted(in_[e.receiver], e.sender);
    ++edge_count_;
    return true;
}

bool Digraph::has_edge(Edge e) const {
    if (e.receiver >= size() || e.sender >= size()) return false;
    if (e.receiver == e.sender) return true;
    const auto& out = out_[e.sender];
    return std::binary_search(out.begin(), out.end(), e.receiver);
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count_);
    for (NodeId r = 0; r < size(); ++r) {
        for (NodeId s : in_[r]) result.push_back({r, s});
    }
    return result;
}

std::vector<std::int64_t> bfs_distances(const Digraph& g, NodeId source) {
    std::vector<std::int64_t> dist(g.size(), -1);
    std::deque<NodeId> frontier{source};
    dist.at(source) = 0;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (NodeId v : g.out_neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                frontier.push_back(v);
            }
        }
    }
    return dist;
}

std::optional<std::pair<NodeId, NodeId>> find_unreachable_pair(const Digraph& g) {
    for (NodeId s = 0; s < g.size(); ++s) {
        const auto dist = bfs_distances(g, s);
        for (NodeId t = 0; t < g.size(); ++t) {
            if (dist[t] < 0) return std::pair{s, t};
        }
    }
    return std::nullopt;
}

bool is_strongly_connected(const Digraph& g) { return !find_unreachable_pair(g).has_value(); }

std::size_t diameter(const Digraph& g) {
    std::int64_t longest = 0;
    for (NodeId s = 0; s < g.size(); ++s) {
        for (NodeId t = 0; const auto d : bfs_distances(g, s)) {
            if (d < 0) {
                throw AssumptionViolation("digraph is not strongly connected: no directed path from node " +
                                          std::to_string(s) + " to node " + std::to_string(t));
            }
            longest = std::max(longest, d);
            ++t;
        }
    }
    return static_cast<std::size_t>(longest);
}

Digraph generate_random_strongly_connected(std::size_t n, double extra_edge_prob, std::uint64_t seed) {
    if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0)) {
        throw std::invalid_argument("extra_edge_prob must lie in [0, 1]");
    }
    Digraph g(n);
    Rng rng(seed);

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    rng.shuffle(std::span<NodeId>(order));
    for (std::size_t i = 0; i < n; ++i) {
        g.add_edge({.receiver = order[(i + 1) % n], .sender = order[i]});
    }

    // Every ordered pair consumes exactly one draw so the stream layout does
    // not depend on which cycle edges were planted.
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId r = 0; r < n; ++r) {
            if (r == s) continue;
            if (rng.bernoulli(extra_edge_prob)) g.add_edge({.receiver = r, .sender = s});
        }
    }
    return g;
}

Digraph directed_cycle(std::size_t n) {
    Digraph g(n);
    for (NodeId i = 0; i < n; ++i) g.add_edge({.receiver = (i + 1) % n, .sender = i});
    return g;
}

Digraph directed_path(std::size_t n) {
    Digraph g(n);
    for (NodeId i = 0; i + 1 < n; ++i) g.add_edge({.receiver = i + 1, .sender = i});
    return g;
}

Digraph bidirectional_path(std::size_t n) {
    Digraph g(n);
    for (NodeId i = 0; i + 1 < n; ++i) {
        g.add_edge({.receiver = i + 1, .sender = i});
        g.add_edge({.receiver = i, .sender = i + 1});
    }
    return g;
}

Digraph complete_digraph(std::size_t n) {
    Digraph g(n);
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId r = 0; r < n; ++r) g.add_edge({.receiver = r, .sender = s});
    }
    return g;
}

Digraph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<Digraph> g;

    auto fail = [&](const std::string& what) -> ConfigError {
        return ConfigError("edge list line " + std::to_string(lineno) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        if (!g) {
            std::string tag;
            long long count = 0;
            if (!(fields >> tag >> count) || tag != "n") throw fail("expected header `n <count>`");
            if (count < 2) throw fail("node count must be at least 2");
            g.emplace(static_cast<std::size_t>(count));
        } else {
            long long receiver = -1;
            long long sender = -1;
            if (!(fields >> receiver >> sender)) throw fail("expected `receiver sender`");
            std::string extra;
            if (fields >> extra) throw fail("trailing token '" + extra + "'");
            const auto n = static_cast<long long>(g->size());
            if (receiver < 0 || receiver >= n || sender < 0 || sender >= n) throw fail("node id out of range");
            if (receiver == sender) continue;
            if (!g->add_edge({static_cast<NodeId>(receiver), static_cast<NodeId>(sender)})) {
                throw fail("duplicate edge");
            }
        }
    }
    if (!g) throw ConfigError("edge list: missing header `n <count>`");
    return std::move(*g);
}

void write_edge_list(std::ostream& out, const Digraph& g) {
    out << "n " << g.size() << '\n';
    for (const auto& e : g.edges()) out << e.receiver << ' ' << e.sender << '\n';
}

} // namespace quagd
