#ifndef SPARSEKIT_SPANNER_HPP
#define SPARSEKIT_SPANNER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "graph.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "shortest_paths.hpp"

namespace sparsekit {

/// Adjacency view of G in which removed edges read as weight 0.
template <GraphView G>
class MaskedView {
public:
    MaskedView(const G& g, const std::vector<bool>& removed) : g_(&g), removed_(&removed) {}

    std::size_t num_nodes() const { return g_->num_nodes(); }
    std::size_t degree(NodeId v) const { return g_->degree(v); }
    Neighbor neighbor(NodeId v, std::size_t k) const
    {
        auto nb = g_->neighbor(v, k);
        if (nb.edge < removed_->size() && (*removed_)[nb.edge])
            nb.weight = 0;
        return nb;
    }

private:
    const G* g_;
    const std::vector<bool>* removed_;
};

struct Spanner {
    std::vector<EdgeId> edges;  // sorted, original weights
    std::size_t levels = 1;

    double stretch() const { return 2.0 * static_cast<double>(levels) - 1.0; }
};

/// Default level count ceil(log_base n), at least 1.
inline std::size_t default_spanner_levels(std::size_t n, double log_base = 2.0)
{
    if (n <= 1)
        return 1;
    const double k = std::ceil(std::log(static_cast<double>(n)) / std::log(log_base) - 1e-12);
    return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

namespace detail {

// Reusable Dijkstra state; only touched entries are reset between growths.
class GrowthWorkspace {
public:
    explicit GrowthWorkspace(std::size_t n) : dist_(n, infinity), parent_edge_(n, 0), settled_(n, false) {}

    struct Result {
        std::size_t nodes = 0;
        std::uint64_t scanned = 0;
    };

    // Grows shortest paths from `sources` (all at distance 0). A node y is
    // entered only through tentative distances strictly below bound(y).
    // Calls on_tree_edge for every parent edge and leaves final distances in
    // dist() until the next reset.
    template <GraphView G, class Bound, class OnEdge>
    Result grow(const G& g, std::span<const NodeId> sources, Bound&& bound, OnEdge&& on_tree_edge)
    {
        reset();
        Result r;
        auto settle = [&](NodeId u, double d) {
            settled_[u] = true;
            touched_.push_back(u);
            dist_[u] = d;
            ++r.nodes;
            const auto deg = g.degree(u);
            r.scanned += deg;
            for (std::size_t k = 0; k < deg; ++k) {
                const auto nb = g.neighbor(u, k);
                if (nb.weight <= 0 || settled_[nb.node])
                    continue;
                const double cand = d + 1.0 / nb.weight;
                if (!(cand < bound(nb.node)))
                    continue;
                heap_.push({cand, nb.edge, u, nb.node});
            }
        };
        for (auto s : sources)
            if (!settled_[s])
                settle(s, 0.0);
        while (!heap_.empty()) {
            const auto b = heap_.top();
            heap_.pop();
            if (settled_[b.to])
                continue;
            on_tree_edge(b.edge);
            settle(b.to, b.cost);
        }
        return r;
    }

    double dist(NodeId v) const { return dist_[v]; }

private:
    void reset()
    {
        for (auto v : touched_) {
            dist_[v] = infinity;
            settled_[v] = false;
        }
        touched_.clear();
    }

    std::vector<double> dist_;
    std::vector<EdgeId> parent_edge_;
    std::vector<bool> settled_;
    std::vector<NodeId> touched_;
    std::priority_queue<BorderEdge, std::vector<BorderEdge>, std::greater<>> heap_;
};

} // namespace detail

/// Thorup-Zwick (2k-1)-spanner. Levels A_0 = V ⊇ A_1 ⊇ ... ⊇ A_k = ∅ keep
/// each node with probability n^(-1/k); every v in A_{i-1} - A_i grows a
/// shortest-path tree over its cluster {w : δ(w,v) < δ(w,A_i)}, and the
/// union of these trees is the spanner. Zero-weight edges are never used.
template <GraphView G>
Spanner build_spanner(const G& g, std::size_t k, std::uint64_t seed, CostLedger* ledger = nullptr)
{
    if (k < 1)
        throw Error(ErrorCode::BadShape, "spanner needs k >= 1");
    const auto n = g.num_nodes();
    Spanner h;
    h.levels = k;
    if (n == 0)
        return h;

    // level[v] = largest i with v in A_i.
    Rng rng(derive_seed(seed, {0x5a11e7}));
    const double keep = std::pow(static_cast<double>(n), -1.0 / static_cast<double>(k));
    std::vector<std::uint32_t> level(n, 0);
    std::vector<NodeId> current(n);
    for (NodeId v = 0; v < n; ++v)
        current[v] = v;
    for (std::size_t i = 1; i < k && !current.empty(); ++i) {
        std::vector<NodeId> next;
        // A level that drops nobody is redrawn a few times.
        for (int attempt = 0; attempt <= 10; ++attempt) {
            next.clear();
            for (auto v : current)
                if (bernoulli(rng, keep))
                    next.push_back(v);
            if (next.size() < current.size())
                break;
        }
        for (auto v : next)
            level[v] = static_cast<std::uint32_t>(i);
        current = std::move(next);
    }

    detail::GrowthWorkspace hub_ws(n), cluster_ws(n);
    std::vector<double> to_hubs(n, infinity);
    std::vector<bool> in_spanner;
    std::uint64_t reads = 0;
    double modeled = 0;
    auto add_edge = [&](EdgeId e) {
        if (e >= in_spanner.size())
            in_spanner.resize(std::max<std::size_t>(2 * in_spanner.size(), e + 1), false);
        if (!in_spanner[e]) {
            in_spanner[e] = true;
            h.edges.push_back(e);
        }
    };
    auto charge = [&](const detail::GrowthWorkspace::Result& r) {
        reads += r.nodes + r.scanned;
        modeled += grover_cost(static_cast<double>(r.scanned), static_cast<double>(r.nodes));
    };

    for (std::size_t i = 1; i <= k; ++i) {
        // δ(·, A_i) from a virtual source joined to A_i at zero cost.
        std::vector<NodeId> hubs;
        for (NodeId v = 0; v < n; ++v)
            if (i < k && level[v] >= i)
                hubs.push_back(v);
        if (hubs.empty()) {
            std::fill(to_hubs.begin(), to_hubs.end(), infinity);
        } else {
            charge(hub_ws.grow(g, hubs, [](NodeId) { return infinity; }, [](EdgeId) {}));
            for (NodeId v = 0; v < n; ++v)
                to_hubs[v] = hub_ws.dist(v);
        }
        for (NodeId v = 0; v < n; ++v) {
            if (level[v] != i - 1)
                continue;
            const NodeId src[] = {v};
            charge(cluster_ws.grow(g, src, [&](NodeId y) { return to_hubs[y]; }, add_edge));
        }
    }
    std::sort(h.edges.begin(), h.edges.end());
    if (ledger) {
        ledger->record_classical(reads);
        ledger->record_modeled(modeled);
    }
    return h;
}

/// Ordered edge-disjoint spanners H_1..H_r, H_j a spanner of G minus the
/// earlier ones. Construction stops at the first empty spanner; all later
/// ones are empty too.
struct SpannerPacking {
    std::size_t requested = 0;
    std::vector<Spanner> layers;  // nonempty prefix

    std::span<const EdgeId> layer(std::size_t j) const
    {
        return j < layers.size() ? std::span<const EdgeId>(layers[j].edges) : std::span<const EdgeId>();
    }

    std::vector<EdgeId> union_edges() const
    {
        std::vector<EdgeId> out;
        for (const auto& s : layers)
            out.insert(out.end(), s.edges.begin(), s.edges.end());
        std::sort(out.begin(), out.end());
        return out;
    }
};

template <GraphView G>
SpannerPacking spanner_packing(const G& g, std::size_t r, std::size_t k, std::uint64_t seed,
                               CostLedger* ledger = nullptr)
{
    if (r < 1)
        throw Error(ErrorCode::BadShape, "packing needs r >= 1");
    SpannerPacking packing;
    packing.requested = r;
    std::vector<bool> removed;
    MaskedView<G> residual(g, removed);
    for (std::size_t j = 0; j < r; ++j) {
        auto h = build_spanner(residual, k, derive_seed(seed, {0xbac4, j}), ledger);
        if (h.edges.empty())
            break;
        for (auto e : h.edges) {
            if (e >= removed.size())
                removed.resize(std::max<std::size_t>(2 * removed.size(), e + 1), false);
            removed[e] = true;
        }
        packing.layers.push_back(std::move(h));
    }
    return packing;
}

} // namespace sparsekit

#endif // SPARSEKIT_SPANNER_HPP
