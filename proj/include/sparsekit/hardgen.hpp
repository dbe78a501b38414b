#ifndef SPARSEKIT_HARDGEN_HPP
#define SPARSEKIT_HARDGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "random.hpp"

namespace sparsekit {

namespace detail {

/// round(1/eps^2) when that is an integer, else 0.
inline std::size_t inverse_square(double epsilon)
{
    if (!(epsilon > 0 && epsilon <= 1))
        return 0;
    const double c = 1.0 / (epsilon * epsilon);
    const double r = std::round(c);
    return std::abs(c - r) <= 1e-9 * r ? static_cast<std::size_t>(r) : 0;
}

} // namespace detail

/// Bipartite graph with 1/eps^2 nodes per side; every left node is joined
/// to a uniformly random half of the right nodes with unit weight. Left
/// nodes are 0..c-1, right nodes c..2c-1.
inline WeightedGraph gen_b_eps(double epsilon, std::uint64_t seed)
{
    const auto c = detail::inverse_square(epsilon);
    if (c == 0)
        throw Error(ErrorCode::BadEpsilon, "1/epsilon^2 must be a positive integer");
    if (c < 2 || c % 2 != 0)
        throw Error(ErrorCode::BadEpsilon, "1/epsilon^2 must be even so each left node sees half the right side");
    Rng rng(seed);
    std::vector<NodeId> right(c);
    std::iota(right.begin(), right.end(), static_cast<NodeId>(c));
    std::vector<RawEdge> raw;
    raw.reserve(c * c / 2);
    for (NodeId l = 0; l < c; ++l) {
        shuffle(right.begin(), right.end(), rng);
        for (std::size_t j = 0; j < c / 2; ++j)
            raw.push_back({l, right[j], 1.0});
    }
    return build_graph(2 * c, raw);
}

/// Strings x^(k)_{i,j} of N bits, k < copies, i, j < c, with at most one
/// nonzero bit each. position(k, i, j) is that bit's index or -1.
struct HiddenInput {
    std::size_t n = 0;
    std::size_t m = 0;
    double epsilon = 0;
    std::size_t copies = 0;  // eps^2 n / 2
    std::size_t c = 0;       // 1 / eps^2
    std::size_t bits = 0;    // N = 2 eps^2 m / n
    std::vector<std::int32_t> positions;

    std::size_t string_index(std::size_t k, std::size_t i, std::size_t j) const { return (k * c + i) * c + j; }
    std::int32_t position(std::size_t k, std::size_t i, std::size_t j) const
    {
        return positions[string_index(k, i, j)];
    }
    bool bit(std::size_t k, std::size_t i, std::size_t j, std::size_t s) const
    {
        return position(k, i, j) == static_cast<std::int32_t>(s);
    }

    std::size_t nonzero_strings() const
    {
        return static_cast<std::size_t>(
            std::count_if(positions.begin(), positions.end(), [](std::int32_t p) { return p >= 0; }));
    }

    /// Every row carries exactly c/2 nonzero strings.
    bool rows_valid() const
    {
        for (std::size_t k = 0; k < copies; ++k)
            for (std::size_t i = 0; i < c; ++i) {
                std::size_t count = 0;
                for (std::size_t j = 0; j < c; ++j)
                    count += position(k, i, j) >= 0;
                if (count != c / 2)
                    return false;
            }
        return true;
    }
};

/// Shape (n, m, eps) with all counts integral; positions left empty.
inline HiddenInput hidden_shape(std::size_t n, std::size_t m, double epsilon)
{
    auto reject = [](const std::string& what) { throw Error(ErrorCode::BadShape, what); };
    const auto c = detail::inverse_square(epsilon);
    if (c == 0)
        reject("1/epsilon^2 must be a positive integer");
    if (c % 2 != 0)
        reject("1/epsilon^2 must be even (c/2 nonzero strings per row)");
    if (n == 0 || n % (2 * c) != 0)
        reject("epsilon^2 n / 2 must be a positive integer");
    if (m == 0 || (2 * m) % (n * c) != 0)
        reject("2 epsilon^2 m / n must be a positive integer");
    if (4 * m > n * n)
        reject("m must not exceed n^2 / 4");
    HiddenInput x;
    x.n = n;
    x.m = m;
    x.epsilon = epsilon;
    x.c = c;
    x.copies = n / (2 * c);
    x.bits = 2 * m / (n * c);
    x.positions.assign(x.copies * c * c, -1);
    return x;
}

/// A valid input: in every row of every copy, c/2 uniformly chosen strings
/// each get one uniformly placed nonzero bit.
inline HiddenInput gen_valid_input(std::size_t n, std::size_t m, double epsilon, std::uint64_t seed)
{
    auto x = hidden_shape(n, m, epsilon);
    Rng rng(seed);
    std::vector<std::size_t> cols(x.c);
    for (std::size_t k = 0; k < x.copies; ++k)
        for (std::size_t i = 0; i < x.c; ++i) {
            std::iota(cols.begin(), cols.end(), 0);
            shuffle(cols.begin(), cols.end(), rng);
            for (std::size_t t = 0; t < x.c / 2; ++t)
                x.positions[x.string_index(k, i, cols[t])] =
                    static_cast<std::int32_t>(uniform_below(rng, x.bits));
        }
    return x;
}

/// M_j = {(i, (i + j) mod n/2) : i < 2m/n} in the complete bipartite graph
/// on 2m/n x n/2 nodes.
inline std::vector<std::pair<std::size_t, std::size_t>> matching_edges(std::size_t j, std::size_t m, std::size_t n)
{
    if (n < 2 || n % 2 != 0 || (2 * m) % n != 0)
        throw Error(ErrorCode::BadShape, "matching needs even n and n dividing 2m");
    const auto half = n / 2;
    const auto left = 2 * m / n;
    if (left > half)
        throw Error(ErrorCode::BadShape, "2m/n must not exceed n/2");
    if (j >= half)
        throw Error(ErrorCode::BadShape, "matching index must be below n/2");
    std::vector<std::pair<std::size_t, std::size_t>> out(left);
    for (std::size_t i = 0; i < left; ++i)
        out[i] = {i, (i + j) % half};
    return out;
}

/// The graph G(x): copies of complete bipartite graphs with N slots per
/// pair (L1 x R1), each slot paired with one edge of the complete bipartite
/// graph L2 x R2. A slot whose bit is 1 keeps its L1-R1 edge at weight 1
/// and its L2-R2 edge at weight 0; a slot whose bit is 0 is replaced by
/// L1-L2 and R1-R2 edges of weight 0.
///
/// Node layout: L1 = [0, n/2), R1 = [n/2, n), L2 = [n, n + 2m/n),
/// R2 = [n + 2m/n, n + 2m/n + n/2). Degrees never depend on x; every
/// neighbor query reads exactly one bit of x.
class HiddenGraph {
public:
    explicit HiddenGraph(const HiddenInput& x) : x_(&x)
    {
        if (x.copies == 0 || x.c == 0 || x.bits == 0 || x.positions.size() != x.copies * x.c * x.c ||
            x.copies * x.c * 2 != x.n || x.c * x.bits * x.n != 2 * x.m)
            throw Error(ErrorCode::BadShape, "hidden input has inconsistent dimensions");
        for (auto p : x.positions)
            if (p >= static_cast<std::int32_t>(x.bits))
                throw Error(ErrorCode::BadShape, "nonzero bit beyond the string length");
        half_ = x.n / 2;
        left2_ = 2 * x.m / x.n;
        if (left2_ > half_)
            throw Error(ErrorCode::BadShape, "2m/n must not exceed n/2");
        check_distinct_ends();
    }

    std::size_t num_nodes() const { return x_->n + left2_ + half_; }
    std::size_t num_edges() const { return 2 * x_->m; }

    std::size_t degree(NodeId v) const
    {
        switch (kind(v)) {
        case Kind::L1:
        case Kind::R1:
            return x_->c * x_->bits;
        case Kind::L2:
            return half_;
        case Kind::R2:
            return left2_;
        }
        return 0;
    }

    Neighbor neighbor(NodeId v, std::size_t q) const
    {
        if (q >= degree(v))
            throw Error(ErrorCode::IndexOutOfRange, "neighbor " + std::to_string(q) + " of node " + std::to_string(v));
        const auto n = x_->n;
        const auto c = x_->c;
        const auto nb = x_->bits;
        switch (kind(v)) {
        case Kind::L1: {
            const auto k = v / c, i = v % c, t = q;
            const Slot s{k, i, t / nb, t % nb};
            return lookup(s) ? Neighbor{r1(s), 1.0, edge_id(s, 0)} : Neighbor{l2(s), 0.0, edge_id(s, 0)};
        }
        case Kind::R1: {
            const auto local = v - half_;
            const auto k = local / c, j = local % c;
            const Slot s{k, q / nb, j, q % nb};
            return lookup(s) ? Neighbor{l1(s), 1.0, edge_id(s, 0)} : Neighbor{r2(s), 0.0, edge_id(s, 1)};
        }
        case Kind::L2: {
            const auto a = v - n;
            const auto s = slot_of(a, q);
            return lookup(s) ? Neighbor{r2(s), 0.0, edge_id(s, 1)} : Neighbor{l1(s), 0.0, edge_id(s, 0)};
        }
        case Kind::R2: {
            const auto b = v - n - left2_;
            const auto a = q;
            const auto s = slot_of(a, (b + half_ - a % half_) % half_);
            return lookup(s) ? Neighbor{l2(s), 0.0, edge_id(s, 1)} : Neighbor{r1(s), 0.0, edge_id(s, 1)};
        }
        }
        throw Error(ErrorCode::BadNodeId, "node " + std::to_string(v));
    }

    std::uint64_t x_lookups() const { return lookups_; }
    void reset_lookups() const { lookups_ = 0; }

    const HiddenInput& input() const { return *x_; }

    /// All 2m edges with their ids; no query accounting.
    WeightedGraph materialize() const
    {
        std::vector<RawEdge> raw;
        raw.reserve(num_edges());
        const auto saved = lookups_;
        for (NodeId v = 0; v < num_nodes(); ++v)
            for (std::size_t q = 0; q < degree(v); ++q) {
                const auto nb = neighbor(v, q);
                if (v < nb.node)
                    raw.push_back({v, nb.node, nb.weight});
            }
        lookups_ = saved;
        if (raw.size() != num_edges())
            throw Error(ErrorCode::BadShape, "hidden graph produced " + std::to_string(raw.size()) + " edges");
        auto g = build_graph(num_nodes(), raw);
        if (g.num_edges() != num_edges())
            throw Error(ErrorCode::BadShape, "hidden graph has duplicate edges");
        return g;
    }

    /// The bipartite graph OR(x) on L1 x R1 with unit weights.
    WeightedGraph or_graph() const
    {
        std::vector<RawEdge> raw;
        for (std::size_t k = 0; k < x_->copies; ++k)
            for (std::size_t i = 0; i < x_->c; ++i)
                for (std::size_t j = 0; j < x_->c; ++j)
                    if (x_->position(k, i, j) >= 0)
                        raw.push_back({l1({k, i, j, 0}), r1({k, i, j, 0}), 1.0});
        return build_graph(num_nodes(), raw);
    }

    bool in_l1(NodeId v) const { return v < half_; }
    bool in_r1(NodeId v) const { return v >= half_ && v < x_->n; }

private:
    enum class Kind { L1, R1, L2, R2 };
    struct Slot {
        std::size_t k, i, j, s;
    };

    Kind kind(NodeId v) const
    {
        if (v < half_)
            return Kind::L1;
        if (v < x_->n)
            return Kind::R1;
        if (v < x_->n + left2_)
            return Kind::L2;
        if (v < num_nodes())
            return Kind::R2;
        throw Error(ErrorCode::BadNodeId, "node " + std::to_string(v));
    }

    bool lookup(const Slot& s) const
    {
        ++lookups_;
        return x_->bit(s.k, s.i, s.j, s.s);
    }

    std::size_t matching_index(const Slot& s) const { return s.k + s.i * x_->copies; }
    std::size_t edge_index(const Slot& s) const { return s.j * x_->bits + s.s; }

    /// The slot whose G2 partner edge is the a-th edge of matching idx.
    Slot slot_of(std::size_t a, std::size_t idx) const
    {
        return {idx % x_->copies, idx / x_->copies, a / x_->bits, a % x_->bits};
    }

    EdgeId edge_id(const Slot& s, int which) const
    {
        const auto sigma = x_->string_index(s.k, s.i, s.j) * x_->bits + s.s;
        return static_cast<EdgeId>(2 * sigma + static_cast<std::size_t>(which));
    }

    NodeId l1(const Slot& s) const { return static_cast<NodeId>(s.k * x_->c + s.i); }
    NodeId r1(const Slot& s) const { return static_cast<NodeId>(half_ + s.k * x_->c + s.j); }
    NodeId l2(const Slot& s) const { return static_cast<NodeId>(x_->n + edge_index(s)); }
    NodeId r2(const Slot& s) const
    {
        return static_cast<NodeId>(x_->n + left2_ + (edge_index(s) + matching_index(s)) % half_);
    }

    // Flipped edges stay simple only if the G2 partners of the slots at any
    // one L1 node (or R1 node) have pairwise distinct left (right) ends.
    void check_distinct_ends() const
    {
        std::vector<std::size_t> seen(num_nodes(), SIZE_MAX);
        const auto c = x_->c, nb = x_->bits;
        for (std::size_t k = 0; k < x_->copies; ++k)
            for (std::size_t u = 0; u < c; ++u) {
                const auto stamp_l = 2 * (k * c + u), stamp_r = stamp_l + 1;
                for (std::size_t a = 0; a < c; ++a)
                    for (std::size_t s = 0; s < nb; ++s) {
                        const auto left_end = l2({k, u, a, s});
                        const auto right_end = r2({k, a, u, s});
                        if (seen[left_end] == stamp_l || seen[right_end] == stamp_r)
                            throw Error(ErrorCode::BadShape, "matching ends collide in copy " + std::to_string(k));
                        seen[left_end] = stamp_l;
                        seen[right_end] = stamp_r;
                    }
            }
    }

    const HiddenInput* x_;
    std::size_t half_ = 0;
    std::size_t left2_ = 0;
    mutable std::uint64_t lookups_ = 0;
};

inline HiddenGraph build_hidden_graph(const HiddenInput& x)
{
    return HiddenGraph(x);
}

/// Fraction of nonzero strings of x witnessed by a positive-weight L1-R1
/// edge of h, a reweighted subgraph of G(x) on the same node set.
inline double audit_sparsifier_recovery(const HiddenInput& x, const WeightedGraph& h)
{
    const auto total = x.nonzero_strings();
    if (total == 0)
        return 0.0;
    const auto half = x.n / 2;
    std::vector<bool> found(x.positions.size(), false);
    std::size_t hits = 0;
    for (const auto& e : h.edges()) {
        if (!(e.w > 0) || e.u >= half || e.v < half || e.v >= x.n)
            continue;
        const auto k = e.u / x.c, i = e.u % x.c;
        const auto kr = (e.v - half) / x.c, j = (e.v - half) % x.c;
        if (k != kr)
            continue;
        const auto idx = x.string_index(k, i, j);
        if (x.positions[idx] >= 0 && !found[idx]) {
            found[idx] = true;
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

} // namespace sparsekit

#endif // SPARSEKIT_HARDGEN_HPP
