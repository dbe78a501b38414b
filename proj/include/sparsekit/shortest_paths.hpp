#ifndef SPARSEKIT_SHORTEST_PATHS_HPP
#define SPARSEKIT_SHORTEST_PATHS_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "graph.hpp"
#include "oracle.hpp"

namespace sparsekit {

struct ParentLink {
    NodeId node;
    EdgeId edge;

    friend bool operator==(const ParentLink&, const ParentLink&) = default;
};

/// Distances are sums of 1/w along tree paths; unreached nodes sit at infinity.
struct ShortestPathTree {
    NodeId root = 0;
    std::vector<double> dist;
    std::vector<std::optional<ParentLink>> parent;
    std::vector<NodeId> order;  // nodes in the order they joined the tree
    std::uint64_t scanned = 0;  // adjacency entries examined

    bool reached(NodeId v) const { return dist[v] != infinity; }
    std::size_t size() const { return order.size(); }

    std::vector<EdgeId> tree_edges() const
    {
        std::vector<EdgeId> out;
        for (auto v : order)
            if (parent[v])
                out.push_back(parent[v]->edge);
        return out;
    }
};

namespace detail {

// Border edge (u, v) with cost dist(u) + 1/w; ordered by (cost, edge id).
struct BorderEdge {
    double cost;
    EdgeId edge;
    NodeId from;
    NodeId to;

    bool operator<(const BorderEdge& o) const { return std::tie(cost, edge) < std::tie(o.cost, o.edge); }
    bool operator>(const BorderEdge& o) const { return o < *this; }
};

} // namespace detail

/// Exact shortest-path tree over the component of v0 (positive-weight
/// edges only). Among equal-cost border edges the smaller edge id wins.
template <GraphView G>
ShortestPathTree dijkstra(const G& g, NodeId v0, CostLedger* ledger = nullptr)
{
    const auto n = g.num_nodes();
    if (v0 >= n)
        throw Error(ErrorCode::BadNodeId, "source " + std::to_string(v0));
    ShortestPathTree t;
    t.root = v0;
    t.dist.assign(n, infinity);
    t.parent.assign(n, std::nullopt);
    std::vector<bool> in_tree(n, false);
    std::priority_queue<detail::BorderEdge, std::vector<detail::BorderEdge>, std::greater<>> heap;

    auto settle = [&](NodeId u, double d) {
        in_tree[u] = true;
        t.dist[u] = d;
        t.order.push_back(u);
        const auto deg = g.degree(u);
        t.scanned += deg;
        for (std::size_t k = 0; k < deg; ++k) {
            const auto nb = g.neighbor(u, k);
            if (nb.weight > 0 && !in_tree[nb.node])
                heap.push({d + 1.0 / nb.weight, nb.edge, u, nb.node});
        }
    };

    settle(v0, 0.0);
    while (!heap.empty()) {
        const auto b = heap.top();
        heap.pop();
        if (in_tree[b.to])
            continue;
        t.parent[b.to] = ParentLink{b.from, b.edge};
        settle(b.to, b.cost);
    }
    if (ledger) {
        ledger->record_classical(t.order.size() + t.scanned);
        ledger->record_modeled(grover_cost(static_cast<double>(t.scanned), static_cast<double>(t.order.size())));
    }
    return t;
}

struct MinfindItem {
    double value;  // may be infinity
    std::uint64_t type;
};

/// Returns min(d, M) indices of pairwise distinct types (M = number of
/// distinct types) such that any item left out that beats a chosen one is
/// itself beaten by a chosen item of its own type. Classically: the d
/// smallest per-type minima, ties broken by index. The modeled quantum
/// cost sqrt(N d) is charged to the ledger.
inline std::vector<std::size_t> minfind(std::size_t d, std::span<const MinfindItem> items,
                                        CostLedger* ledger = nullptr)
{
    std::unordered_map<std::uint64_t, std::size_t> best;
    best.reserve(items.size());
    auto less = [&](std::size_t a, std::size_t b) {
        return std::tie(items[a].value, a) < std::tie(items[b].value, b);
    };
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto [it, inserted] = best.try_emplace(items[i].type, i);
        if (!inserted && less(i, it->second))
            it->second = i;
    }
    std::vector<std::size_t> minima;
    minima.reserve(best.size());
    for (const auto& [type, idx] : best)
        minima.push_back(idx);
    const auto take = std::min(d, minima.size());
    std::partial_sort(minima.begin(), minima.begin() + static_cast<std::ptrdiff_t>(take), minima.end(), less);
    minima.resize(take);
    if (ledger)
        ledger->record_search(items.size(), static_cast<double>(d));
    return minima;
}

/// Tree vertices split into partitions P_1..P_L, with the candidate border
/// edges B_k found for each partition when it was formed.
struct PartitionState {
    struct Candidate {
        NodeId from;
        NodeId to;
        EdgeId edge;
        double cost;
    };
    std::vector<std::vector<NodeId>> partitions;
    std::vector<std::vector<Candidate>> borders;

    std::size_t levels() const { return partitions.size(); }
};

/// Sizes are powers of two, nonincreasing, each strictly larger than the
/// sum of all later ones; each B_k has at most |P_k| entries with distinct
/// end nodes.
inline bool partition_invariants_hold(const PartitionState& s)
{
    std::size_t suffix = 0;
    for (std::size_t k = s.partitions.size(); k-- > 0;) {
        const auto size = s.partitions[k].size();
        if (!std::has_single_bit(size))
            return false;
        if (k + 1 < s.partitions.size() && s.partitions[k + 1].size() > size)
            return false;
        if (size <= suffix)
            return false;
        suffix += size;
    }
    for (std::size_t k = 0; k < s.borders.size(); ++k) {
        const auto& b = s.borders[k];
        if (b.size() > s.partitions[k].size())
            return false;
        std::vector<NodeId> ends;
        for (const auto& c : b)
            ends.push_back(c.to);
        std::sort(ends.begin(), ends.end());
        if (std::adjacent_find(ends.begin(), ends.end()) != ends.end())
            return false;
    }
    return true;
}

using PartitionObserver = std::function<void(const PartitionState&, std::size_t tree_size)>;

/// Shortest-path tree grown through power-of-two partitions of the tree
/// vertices, each partition querying only its own border through minfind.
/// Produces the same distances (and, with the shared tie-break, the same
/// parents) as dijkstra. `observe` runs after every border recomputation.
template <GraphView G>
ShortestPathTree spt_partitioned(const G& g, NodeId v0, CostLedger* ledger = nullptr,
                                 const PartitionObserver& observe = {})
{
    const auto n = g.num_nodes();
    if (v0 >= n)
        throw Error(ErrorCode::BadNodeId, "source " + std::to_string(v0));
    ShortestPathTree t;
    t.root = v0;
    t.dist.assign(n, infinity);
    t.parent.assign(n, std::nullopt);
    std::vector<bool> in_tree(n, false);
    in_tree[v0] = true;
    t.dist[v0] = 0;
    t.order.push_back(v0);

    PartitionState state;
    state.partitions.push_back({v0});
    state.borders.emplace_back();

    std::vector<MinfindItem> items;
    std::vector<PartitionState::Candidate> edges;
    CostLedger searches;  // only its modeled part is charged; reads are counted below
    std::uint64_t degree_reads = 0;
    std::uint64_t neighbor_reads = 0;
    while (true) {
        // Border of the top partition, laid out in edge-id order so that
        // minfind's index tie-break agrees with dijkstra's.
        edges.clear();
        for (auto u : state.partitions.back()) {
            const auto deg = g.degree(u);
            ++degree_reads;
            neighbor_reads += deg;
            for (std::size_t k = 0; k < deg; ++k) {
                const auto nb = g.neighbor(u, k);
                const double cost = in_tree[nb.node] ? infinity : t.dist[u] + edge_cost(nb.weight);
                edges.push_back({u, nb.node, nb.edge, cost});
            }
        }
        std::sort(edges.begin(), edges.end(),
                  [](const auto& a, const auto& b) { return std::tie(a.edge, a.from) < std::tie(b.edge, b.from); });
        items.clear();
        for (const auto& c : edges)
            items.push_back({c.cost, c.to});
        auto& border = state.borders.back();
        border.clear();
        for (auto idx : minfind(state.partitions.back().size(), items, &searches))
            border.push_back(edges[idx]);

        assert(partition_invariants_hold(state));
        if (observe)
            observe(state, t.order.size());

        const PartitionState::Candidate* best = nullptr;
        for (const auto& b : state.borders)
            for (const auto& c : b)
                if (!in_tree[c.to] && c.cost != infinity &&
                    (!best || std::tie(c.cost, c.edge) < std::tie(best->cost, best->edge)))
                    best = &c;
        if (!best)
            break;

        const auto chosen = *best;
        in_tree[chosen.to] = true;
        t.dist[chosen.to] = chosen.cost;
        t.parent[chosen.to] = ParentLink{chosen.from, chosen.edge};
        t.order.push_back(chosen.to);
        state.partitions.push_back({chosen.to});
        state.borders.emplace_back();
        while (state.partitions.size() >= 2 &&
               state.partitions.back().size() == state.partitions[state.partitions.size() - 2].size()) {
            auto top = std::move(state.partitions.back());
            state.partitions.pop_back();
            state.borders.pop_back();
            auto& below = state.partitions.back();
            below.insert(below.end(), top.begin(), top.end());
        }
    }
    t.scanned = neighbor_reads;
    if (ledger) {
        ledger->record_classical(degree_reads + neighbor_reads);
        ledger->record_modeled(searches.modeled_quantum_queries);
    }
    return t;
}

} // namespace sparsekit

#endif // SPARSEKIT_SHORTEST_PATHS_HPP
