#include <gtest/gtest.h>

#include <sparsekit/generators.hpp>
#include <sparsekit/shortest_paths.hpp>

#include "support/reference.hpp"

#include <set>

using namespace sparsekit;

namespace {

// Random graph whose weights come from a small set including 0.
WeightedGraph mixed_graph(std::size_t n, double p, std::uint64_t seed)
{
    Rng rng(seed);
    const double choices[] = {0.0, 0.5, 1.0, 2.0, 4.0, 0.25, 3.0};
    std::vector<RawEdge> raw;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (bernoulli(rng, p))
                raw.push_back({u, v, choices[uniform_below(rng, 7)]});
    return build_graph(n, raw);
}

} // namespace

TEST(Dijkstra, SeriesCosts)
{
    const auto g = build_graph(3, {{0, 1, 2.0}, {1, 2, 4.0}});
    const auto t = dijkstra(g, 0);
    EXPECT_EQ(t.dist, (std::vector<double>{0, 0.5, 0.75}));
    ASSERT_TRUE(t.parent[2]);
    EXPECT_EQ(t.parent[2]->node, 1u);
    EXPECT_FALSE(t.parent[0]);
}

TEST(Dijkstra, ForbiddenEdgeIsNeverTraversed)
{
    const auto g = build_graph(2, {{0, 1, 0.0}});
    const auto t = dijkstra(g, 0);
    EXPECT_EQ(t.dist[1], infinity);
    EXPECT_EQ(t.order, std::vector<NodeId>{0});
}

TEST(Dijkstra, BadSource)
{
    EXPECT_THROW(dijkstra(gen::path(3), 3), Error);
}

TEST(Dijkstra, MatchesBellmanFord)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto g = mixed_graph(30, 0.15, seed);
        const auto expected = ref::bellman_ford(g, 0);
        const auto t = dijkstra(g, 0);
        EXPECT_EQ(t.dist, expected) << "seed " << seed;
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gen::gnp(40, 0.1, seed, {0.1, 5.0});
        const auto expected = ref::bellman_ford(g, 3);
        const auto t = dijkstra(g, 3);
        for (std::size_t v = 0; v < g.num_nodes(); ++v)
            EXPECT_DOUBLE_EQ(t.dist[v], expected[v]);
    }
}

TEST(Dijkstra, TreeConsistency)
{
    const auto g = mixed_graph(50, 0.1, 77);
    const auto t = dijkstra(g, 0);
    const auto comps = connected_components(g);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        EXPECT_EQ(t.reached(v), comps.same(0, v));
        if (v != 0 && t.parent[v]) {
            const auto& p = *t.parent[v];
            EXPECT_EQ(t.dist[v], t.dist[p.node] + 1.0 / g.edge(p.edge).w);
        }
    }
}

TEST(Minfind, DistinctTypes)
{
    const std::vector<MinfindItem> items{{5, 0}, {3, 1}, {9, 2}};
    auto got = minfind(2, items);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, (std::vector<std::size_t>{0, 1}));
}

TEST(Minfind, PerTypeMinima)
{
    const std::vector<MinfindItem> items{{5, 0}, {3, 0}, {9, 1}};
    auto got = minfind(2, items);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, (std::vector<std::size_t>{1, 2}));
    EXPECT_TRUE(ref::minfind_valid(2, items, got));
    // The only other size-2 set with distinct types violates the condition.
    EXPECT_FALSE(ref::minfind_valid(2, items, {0, 2}));
}

TEST(Minfind, SizeIsMinOfDAndTypes)
{
    const std::vector<MinfindItem> items{{1, 4}, {2, 5}, {3, 6}, {0.5, 4}};
    EXPECT_EQ(minfind(10, items).size(), 3u);
}

TEST(Minfind, RandomInstancesSatisfyPostcondition)
{
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 1 + uniform_below(rng, 30);
        std::vector<MinfindItem> items(n);
        for (auto& it : items) {
            it.value = bernoulli(rng, 0.1) ? infinity : static_cast<double>(uniform_below(rng, 10));
            it.type = uniform_below(rng, 8);
        }
        const auto d = 1 + uniform_below(rng, 10);
        CostLedger ledger;
        const auto got = minfind(d, items, &ledger);
        EXPECT_TRUE(ref::minfind_valid(d, items, got));
        EXPECT_DOUBLE_EQ(ledger.modeled_quantum_queries, std::sqrt(static_cast<double>(n * d)));
    }
}

TEST(SptPartitioned, SingleNode)
{
    const auto g = build_graph(1, std::vector<RawEdge>{});
    std::size_t calls = 0;
    const auto t = spt_partitioned(g, 0, nullptr, [&](const PartitionState& s, std::size_t) {
        ++calls;
        EXPECT_EQ(s.levels(), 1u);
    });
    EXPECT_EQ(t.order, std::vector<NodeId>{0});
    EXPECT_EQ(calls, 1u);
}

TEST(SptPartitioned, StarMergesIntoOnePartition)
{
    std::vector<RawEdge> raw;
    for (NodeId leaf = 1; leaf <= 8; ++leaf)
        raw.push_back({0, leaf, 2.0});
    const auto g = build_graph(9, raw);
    bool checked = false;
    const auto t = spt_partitioned(g, 0, nullptr, [&](const PartitionState& s, std::size_t size) {
        if (size == 8) {
            ASSERT_EQ(s.levels(), 1u);
            EXPECT_EQ(s.partitions[0].size(), 8u);
            checked = true;
        }
    });
    EXPECT_TRUE(checked);
    for (NodeId leaf = 1; leaf <= 8; ++leaf)
        EXPECT_EQ(t.dist[leaf], 0.5);
}

TEST(SptPartitioned, EqualsDijkstraWithInvariants)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const auto n = 2 + uniform_below(rng, 40);
        const auto g = mixed_graph(n, 0.05 + 0.3 * uniform01(rng), seed + 1000);
        const auto v0 = static_cast<NodeId>(uniform_below(rng, n));
        std::size_t steps = 0;
        bool ok = true;
        const auto a = spt_partitioned(g, v0, nullptr, [&](const PartitionState& s, std::size_t size) {
            ++steps;
            std::size_t total = 0;
            for (const auto& p : s.partitions)
                total += p.size();
            ok = ok && partition_invariants_hold(s) && total == size;
        });
        const auto b = dijkstra(g, v0);
        EXPECT_TRUE(ok) << "seed " << seed;
        EXPECT_EQ(a.dist, b.dist) << "seed " << seed;
        EXPECT_EQ(a.parent, b.parent) << "seed " << seed;
        EXPECT_EQ(steps, a.order.size());
    }
}

TEST(SptPartitioned, BordersSatisfyMinfindPostcondition)
{
    const auto g = mixed_graph(25, 0.3, 4);
    spt_partitioned(g, 0, nullptr, [&](const PartitionState& s, std::size_t) {
        for (const auto& b : s.borders) {
            std::set<NodeId> ends;
            for (const auto& c : b)
                EXPECT_TRUE(ends.insert(c.to).second);
        }
    });
}

TEST(PartitionInvariants, DetectsViolations)
{
    PartitionState s;
    s.partitions = {{0, 1, 2, 3}, {4, 5}, {6}};
    s.borders.resize(3);
    EXPECT_TRUE(partition_invariants_hold(s));
    s.partitions = {{0, 1}, {2, 3}};
    s.borders.resize(2);
    EXPECT_FALSE(partition_invariants_hold(s));
    s.partitions = {{0, 1, 2}};
    s.borders.resize(1);
    EXPECT_FALSE(partition_invariants_hold(s));
    s.partitions = {{0, 1}};
    s.borders = {{{0, 5, 0, 1.0}, {1, 5, 1, 2.0}}};
    EXPECT_FALSE(partition_invariants_hold(s));
}

TEST(CostAccounting, SptChargesReads)
{
    const auto g = gen::gnp(30, 0.3, 1);
    CostLedger a, b;
    const auto t = dijkstra(g, 0, &a);
    spt_partitioned(g, 0, &b);
    EXPECT_EQ(a.classical_queries, t.order.size() + t.scanned);
    EXPECT_GT(a.modeled_quantum_queries, 0);
    EXPECT_GT(b.classical_queries, 0u);
    EXPECT_GT(b.modeled_quantum_queries, 0);
}
