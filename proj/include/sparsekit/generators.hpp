#ifndef SPARSEKIT_GENERATORS_HPP
#define SPARSEKIT_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "linear.hpp"
#include "random.hpp"

namespace sparsekit::gen {

struct WeightRange {
    double lo = 1.0;
    double hi = 1.0;
};

inline double draw_weight(Rng& rng, WeightRange w)
{
    return w.lo == w.hi ? w.lo : w.lo + (w.hi - w.lo) * uniform01(rng);
}

/// Erdos-Renyi G(n, p) with weights uniform in [lo, hi].
inline WeightedGraph gnp(std::size_t n, double p, std::uint64_t seed, WeightRange w = {})
{
    if (!(p >= 0 && p <= 1))
        throw Error(ErrorCode::BadShape, "edge probability must lie in [0, 1]");
    if (!(w.lo >= 0 && w.hi >= w.lo))
        throw Error(ErrorCode::BadWeight, "weight range");
    Rng rng(seed);
    std::vector<RawEdge> raw;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (bernoulli(rng, p))
                raw.push_back({u, v, draw_weight(rng, w)});
    return build_graph(n, raw);
}

/// G(n, p) made connected by linking consecutive components with one extra
/// edge each.
inline WeightedGraph gnp_connected(std::size_t n, double p, std::uint64_t seed, WeightRange w = {})
{
    auto g = gnp(n, p, seed, w);
    const auto comps = connected_components(g);
    if (comps.count <= 1)
        return g;
    std::vector<NodeId> rep(comps.count, static_cast<NodeId>(n));
    for (NodeId v = 0; v < n; ++v)
        if (rep[comps.label[v]] == n)
            rep[comps.label[v]] = v;
    Rng rng(derive_seed(seed, {1}));
    std::vector<RawEdge> raw;
    for (const auto& e : g.edges())
        raw.push_back({e.u, e.v, e.w});
    for (std::size_t c = 1; c < comps.count; ++c)
        raw.push_back({rep[c - 1], rep[c], draw_weight(rng, w)});
    return build_graph(n, raw);
}

/// Exactly m distinct uniformly random edges.
inline WeightedGraph gnm(std::size_t n, std::size_t m, std::uint64_t seed, WeightRange w = {})
{
    if (n < 2 || m > n * (n - 1) / 2)
        throw Error(ErrorCode::BadShape, "too many edges for n");
    Rng rng(seed);
    std::vector<std::uint64_t> pairs(n * (n - 1) / 2);
    for (std::uint64_t i = 0; i < pairs.size(); ++i)
        pairs[i] = i;
    for (std::size_t i = 0; i < m; ++i)
        std::swap(pairs[i], pairs[i + uniform_below(rng, pairs.size() - i)]);
    std::vector<RawEdge> raw;
    raw.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        // Decode the pair index in row-major order of the strict upper triangle.
        auto idx = pairs[i];
        NodeId u = 0;
        while (idx >= n - 1 - u) {
            idx -= n - 1 - u;
            ++u;
        }
        raw.push_back({u, static_cast<NodeId>(u + 1 + idx), draw_weight(rng, w)});
    }
    return build_graph(n, raw);
}

inline WeightedGraph path(std::size_t n, double w = 1.0)
{
    std::vector<RawEdge> raw;
    for (NodeId v = 0; v + 1 < n; ++v)
        raw.push_back({v, v + 1, w});
    return build_graph(n, raw);
}

inline WeightedGraph cycle(std::size_t n, double w = 1.0)
{
    if (n < 3)
        throw Error(ErrorCode::BadShape, "cycle needs at least 3 nodes");
    std::vector<RawEdge> raw;
    for (NodeId v = 0; v < n; ++v)
        raw.push_back({v, static_cast<NodeId>((v + 1) % n), w});
    return build_graph(n, raw);
}

inline WeightedGraph complete(std::size_t n, double w = 1.0)
{
    std::vector<RawEdge> raw;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            raw.push_back({u, v, w});
    return build_graph(n, raw);
}

inline WeightedGraph grid(std::size_t rows, std::size_t cols, double w = 1.0)
{
    std::vector<RawEdge> raw;
    auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                raw.push_back({id(r, c), id(r, c + 1), w});
            if (r + 1 < rows)
                raw.push_back({id(r, c), id(r + 1, c), w});
        }
    return build_graph(rows * cols, raw);
}

/// Two unit-weight cliques of size k joined by a single unit edge
/// (k - 1, k).
inline WeightedGraph bridged_cliques(std::size_t k)
{
    if (k < 2)
        throw Error(ErrorCode::BadShape, "cliques need at least 2 nodes");
    std::vector<RawEdge> raw;
    for (NodeId base : {NodeId{0}, static_cast<NodeId>(k)})
        for (NodeId u = 0; u < k; ++u)
            for (NodeId v = u + 1; v < k; ++v)
                raw.push_back({base + u, base + v, 1.0});
    raw.push_back({static_cast<NodeId>(k - 1), static_cast<NodeId>(k), 1.0});
    return build_graph(2 * k, raw);
}

/// Random symmetric diagonally dominant matrix: each off-diagonal pair is
/// present with probability `density`, magnitude uniform in [0.5, 1.5],
/// positive with probability `positive`; the diagonal is the absolute row
/// sum plus an excess uniform in [0, max_excess].
inline SparseMatrix random_sdd(std::size_t n, double density, std::uint64_t seed, double positive = 0.3,
                               double max_excess = 1.0)
{
    Rng rng(seed);
    std::vector<SparseMatrix::Triplet> entries;
    std::vector<double> row_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!bernoulli(rng, density))
                continue;
            const double mag = 0.5 + uniform01(rng);
            const double v = bernoulli(rng, positive) ? mag : -mag;
            entries.push_back({i, j, v});
            entries.push_back({j, i, v});
            row_sum[i] += mag;
            row_sum[j] += mag;
        }
    for (std::size_t i = 0; i < n; ++i)
        entries.push_back({i, i, row_sum[i] + max_excess * uniform01(rng)});
    return SparseMatrix::from_triplets(n, std::move(entries));
}

} // namespace sparsekit::gen

#endif // SPARSEKIT_GENERATORS_HPP
