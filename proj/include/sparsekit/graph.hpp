#ifndef SPARSEKIT_GRAPH_HPP
#define SPARSEKIT_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace sparsekit {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr double infinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t default_dense_limit = 4096;

struct Edge {
    NodeId u;  // u < v
    NodeId v;
    double w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct RawEdge {
    NodeId u;
    NodeId v;
    double w;
};

/// One adjacency-list entry.
struct Neighbor {
    NodeId node;
    double weight;
    EdgeId edge;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Adjacency-list access: degree of a node and its k-th neighbor. Weight 0
/// marks a forbidden edge (traversal cost 1/w = infinity).
template <class G>
concept GraphView = requires(const G& g, NodeId v, std::size_t k) {
    { g.num_nodes() } -> std::convertible_to<std::size_t>;
    { g.degree(v) } -> std::convertible_to<std::size_t>;
    { g.neighbor(v, k) } -> std::same_as<Neighbor>;
};

/// Traversal cost of an edge of weight w.
inline double edge_cost(double w) noexcept
{
    return w > 0 ? 1.0 / w : infinity;
}

/// Immutable undirected weighted graph in compressed adjacency form.
/// Edges are stored once with u < v, sorted by (u, v); every edge appears
/// in both endpoint adjacency lists, ordered by edge id.
class WeightedGraph {
public:
    WeightedGraph() = default;

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    double total_weight() const noexcept { return total_weight_; }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    Neighbor neighbor(NodeId v, std::size_t k) const { return adjacency_[offsets_[v] + k]; }
    std::span<const Neighbor> adjacency(NodeId v) const
    {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    double weighted_degree(NodeId v) const
    {
        double d = 0;
        for (const auto& nb : adjacency(v))
            d += nb.weight;
        return d;
    }

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

    friend WeightedGraph build_graph(std::size_t n, std::span<const RawEdge> raw_edges);

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    double total_weight_ = 0;
};

/// Builds a graph from an unordered edge list. Parallel edges are merged by
/// summing their weights; the result does not depend on the input order.
inline WeightedGraph build_graph(std::size_t n, std::span<const RawEdge> raw_edges)
{
    if (n > std::numeric_limits<NodeId>::max())
        throw Error(ErrorCode::BadNodeId, "node count exceeds 32-bit ids");

    std::vector<Edge> sorted;
    sorted.reserve(raw_edges.size());
    for (const auto& r : raw_edges) {
        if (r.u >= n || r.v >= n)
            throw Error(ErrorCode::BadNodeId,
                        "edge (" + std::to_string(r.u) + "," + std::to_string(r.v) + ") with n=" + std::to_string(n));
        if (r.u == r.v)
            throw Error(ErrorCode::RejectedEdge, "self-loop at node " + std::to_string(r.u));
        if (!std::isfinite(r.w) || r.w < 0)
            throw Error(ErrorCode::BadWeight, "weight " + std::to_string(r.w));
        sorted.push_back({std::min(r.u, r.v), std::max(r.u, r.v), r.w});
    }
    // Sorting by weight as well makes the floating-point merge order canonical.
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
    });

    WeightedGraph g;
    g.n_ = n;
    for (const auto& e : sorted) {
        if (!g.edges_.empty() && g.edges_.back().u == e.u && g.edges_.back().v == e.v)
            g.edges_.back().w += e.w;
        else
            g.edges_.push_back(e);
    }
    if (g.edges_.size() > std::numeric_limits<EdgeId>::max())
        throw Error(ErrorCode::BadShape, "too many edges for 32-bit ids");

    g.offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
        ++g.offsets_[e.u + 1];
        ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adjacency_.resize(2 * g.edges_.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
        const auto& e = g.edges_[id];
        g.adjacency_[fill[e.u]++] = {e.v, e.w, id};
        g.adjacency_[fill[e.v]++] = {e.u, e.w, id};
        g.total_weight_ += e.w;
    }
    return g;
}

inline WeightedGraph build_graph(std::size_t n, const std::vector<RawEdge>& raw_edges)
{
    return build_graph(n, std::span<const RawEdge>(raw_edges));
}

/// Same edge set with new weights, indexed by edge id.
inline WeightedGraph reweight(const WeightedGraph& g, std::span<const double> weights)
{
    if (weights.size() != g.num_edges())
        throw Error(ErrorCode::LengthMismatch, "one weight per edge expected");
    std::vector<RawEdge> raw;
    raw.reserve(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        raw.push_back({g.edge(e).u, g.edge(e).v, weights[e]});
    return build_graph(g.num_nodes(), raw);
}

/// Nonempty proper subset S of the node set.
class Cut {
public:
    Cut(std::size_t n, std::vector<NodeId> members) : n_(n), members_(std::move(members))
    {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        if (!members_.empty() && members_.back() >= n)
            throw Error(ErrorCode::BadNodeId, "cut member out of range");
        if (members_.empty() || members_.size() >= n)
            throw Error(ErrorCode::BadShape, "cut must be a nonempty proper subset");
    }

    static Cut from_indicator(const std::vector<bool>& in_s)
    {
        std::vector<NodeId> members;
        for (NodeId v = 0; v < in_s.size(); ++v)
            if (in_s[v])
                members.push_back(v);
        return Cut(in_s.size(), std::move(members));
    }

    std::size_t num_nodes() const noexcept { return n_; }
    std::span<const NodeId> members() const noexcept { return members_; }

    std::vector<bool> indicator() const
    {
        std::vector<bool> in_s(n_, false);
        for (auto v : members_)
            in_s[v] = true;
        return in_s;
    }

    Cut complement() const
    {
        auto in_s = indicator();
        in_s.flip();
        return from_indicator(in_s);
    }

private:
    std::size_t n_;
    std::vector<NodeId> members_;
};

inline double cut_value(const WeightedGraph& g, const Cut& s)
{
    if (s.num_nodes() != g.num_nodes())
        throw Error(ErrorCode::LengthMismatch, "cut defined on a different node count");
    const auto in_s = s.indicator();
    double value = 0;
    for (const auto& e : g.edges())
        if (in_s[e.u] != in_s[e.v])
            value += e.w;
    return value;
}

inline double laplacian_quadratic(const WeightedGraph& g, std::span<const double> x)
{
    if (x.size() != g.num_nodes())
        throw Error(ErrorCode::LengthMismatch,
                    "vector of length " + std::to_string(x.size()) + " for n=" + std::to_string(g.num_nodes()));
    double q = 0;
    for (const auto& e : g.edges()) {
        const double d = x[e.u] - x[e.v];
        q += e.w * d * d;
    }
    return q;
}

inline void check_dense(std::size_t n, std::size_t limit)
{
    if (n > limit)
        throw Error(ErrorCode::TooLargeForDense,
                    "n=" + std::to_string(n) + " exceeds dense limit " + std::to_string(limit));
}

inline Eigen::MatrixXd dense_laplacian(const WeightedGraph& g, std::size_t limit = default_dense_limit)
{
    check_dense(g.num_nodes(), limit);
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        l(e.u, e.v) -= e.w;
        l(e.v, e.u) -= e.w;
        l(e.u, e.u) += e.w;
        l(e.v, e.v) += e.w;
    }
    return l;
}

/// Component label per node; only positive-weight edges connect.
struct Components {
    std::vector<std::uint32_t> label;
    std::uint32_t count = 0;

    bool same(NodeId a, NodeId b) const { return label[a] == label[b]; }
};

template <GraphView G>
Components connected_components(const G& g)
{
    const auto n = g.num_nodes();
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    Components c{std::vector<std::uint32_t>(n, unset), 0};
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (c.label[s] != unset)
            continue;
        c.label[s] = c.count;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            const auto deg = g.degree(v);
            for (std::size_t k = 0; k < deg; ++k) {
                const auto nb = g.neighbor(v, k);
                if (nb.weight > 0 && c.label[nb.node] == unset) {
                    c.label[nb.node] = c.count;
                    stack.push_back(nb.node);
                }
            }
        }
        ++c.count;
    }
    return c;
}

template <GraphView G>
bool is_connected(const G& g)
{
    return g.num_nodes() <= 1 || connected_components(g).count == 1;
}

} // namespace sparsekit

#endif // SPARSEKIT_GRAPH_HPP
