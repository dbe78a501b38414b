#include <gtest/gtest.h>

#include <sparsekit/generators.hpp>
#include <sparsekit/oracle.hpp>

#include <array>
#include <functional>
#include <map>

using namespace sparsekit;

namespace {

struct Constant {
    bool value;
    bool bit(std::uint64_t) const { return value; }
};

struct Pattern {
    std::vector<bool> bits;
    bool bit(std::uint64_t i) const { return bits[i]; }
};

} // namespace

TEST(QueryOracle, PathQueries)
{
    const auto g = gen::path(3);
    QueryOracle o(g);
    EXPECT_EQ(o.degree(1), 2u);
    const auto nb = o.neighbor(0, 0);
    EXPECT_EQ(nb.node, 1u);
    EXPECT_DOUBLE_EQ(nb.weight, 1.0);
    EXPECT_DOUBLE_EQ(o.weight(2, 0), 1.0);
    EXPECT_EQ(o.degree_queries(), 1u);
    EXPECT_EQ(o.neighbor_queries(), 1u);
    EXPECT_EQ(o.weight_queries(), 1u);
}

TEST(QueryOracle, OutOfRange)
{
    const auto g = gen::path(3);
    QueryOracle o(g);
    try {
        o.neighbor(0, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
    EXPECT_THROW(o.degree(3), Error);
    EXPECT_EQ(o.total_queries(), 0u);
}

TEST(QueryOracle, EveryAccessBumpsOneCounter)
{
    const auto g = gen::gnp(20, 0.4, 2);
    QueryOracle o(g);
    Rng rng(5);
    std::uint64_t prev = 0;
    for (int i = 0; i < 100; ++i) {
        const auto v = static_cast<NodeId>(uniform_below(rng, 20));
        const auto kind = uniform_below(rng, 3);
        const auto deg = g.degree(v);
        if (kind == 0 || deg == 0)
            o.degree(v);
        else if (kind == 1)
            o.neighbor(v, uniform_below(rng, deg));
        else
            o.weight(v, uniform_below(rng, deg));
        EXPECT_EQ(o.total_queries(), prev + 1);
        prev = o.total_queries();
    }
    EXPECT_EQ(o.degree_queries() + o.neighbor_queries() + o.weight_queries(), 100u);
}

TEST(GroverCost, Examples)
{
    EXPECT_DOUBLE_EQ(grover_cost(100, 0), 10.0);
    EXPECT_DOUBLE_EQ(grover_cost(100, 25), 50.0);
    EXPECT_DOUBLE_EQ(grover_cost(1e4, 1e2), 1e3);
    CostLedger ledger;
    ledger.record_search(10000, 100);
    EXPECT_EQ(ledger.classical_queries, 10000u);
    EXPECT_DOUBLE_EQ(ledger.modeled_quantum_queries, 1000.0);
}

TEST(CostLedger, ModeledNeverExceedsClassicalForSearches)
{
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const auto n = 1 + uniform_below(rng, 100000);
        const auto s = static_cast<double>(uniform_below(rng, n + 1));
        CostLedger l;
        l.record_search(n, s);
        EXPECT_LE(l.modeled_quantum_queries, static_cast<double>(l.classical_queries) * (1 + 1e-12));
    }
}

TEST(CostLedger, CombineIsAssociative)
{
    CostLedger a{3, 1.5}, b{4, 2.0}, c{10, 0.25};
    const auto left = (a + b) + c;
    const auto right = a + (b + c);
    EXPECT_EQ(left.classical_queries, right.classical_queries);
    EXPECT_DOUBLE_EQ(left.modeled_quantum_queries, right.modeled_quantum_queries);
}

TEST(GF65536, TablesMatchShiftAndAdd)
{
    EXPECT_TRUE(GF65536::tables().primitive);
    Rng rng(99);
    for (int i = 0; i < 20000; ++i) {
        const auto a = static_cast<std::uint32_t>(uniform_below(rng, 1 << 16));
        const auto b = static_cast<std::uint32_t>(uniform_below(rng, 1 << 16));
        ASSERT_EQ(GF65536::mul(a, b), GF65536::mul_slow(a, b));
    }
    EXPECT_EQ(GF65536::mul(0, 1234), 0u);
    EXPECT_EQ(GF65536::mul(1, 1234), 1234u);
}

TEST(KWiseBits, Deterministic)
{
    const KWiseBits a(8, 42), b(8, 42);
    for (std::uint64_t i = 0; i < 1000; ++i)
        EXPECT_EQ(a.bit(i * 7919), b.bit(i * 7919));
    EXPECT_DOUBLE_EQ(a.probability(), 0.25);
}

TEST(KWiseBits, FrequencyOfOnes)
{
    const KWiseBits r(16, 2024);
    std::size_t ones = 0;
    const std::size_t count = 100000;
    for (std::uint64_t i = 0; i < count; ++i)
        ones += r.bit(i);
    EXPECT_NEAR(static_cast<double>(ones) / count, 0.25, 0.01);
}

TEST(KWiseBits, FieldElementInjectiveBelowFieldSize)
{
    std::vector<bool> seen(1 << 16, false);
    for (std::uint64_t i = 0; i < (1u << 16); ++i) {
        const auto x = KWiseBits::field_element(i);
        ASSERT_FALSE(seen[x]);
        seen[x] = true;
    }
}

// Over all q^k coefficient vectors, the values at any k distinct points
// hit every k-tuple exactly once.
template <std::size_t K>
void exhaustive_uniformity()
{
    using F = PrimeField<7>;
    constexpr std::uint32_t q = F::size;
    std::size_t total = 1;
    for (std::size_t i = 0; i < K; ++i)
        total *= q;
    std::array<std::uint32_t, K> pts{};
    std::function<void(std::size_t, std::uint32_t)> choose = [&](std::size_t depth, std::uint32_t start) {
        if (depth == K) {
            std::map<std::array<std::uint32_t, K>, std::size_t> hits;
            for (std::size_t code = 0; code < total; ++code) {
                std::vector<std::uint32_t> coeff(K);
                auto c = code;
                for (auto& x : coeff) {
                    x = static_cast<std::uint32_t>(c % q);
                    c /= q;
                }
                PolynomialHash<F> h(coeff);
                std::array<std::uint32_t, K> values{};
                for (std::size_t i = 0; i < K; ++i)
                    values[i] = h(pts[i]);
                ++hits[values];
            }
            ASSERT_EQ(hits.size(), total);
            for (const auto& [v, count] : hits)
                ASSERT_EQ(count, 1u);
            return;
        }
        for (std::uint32_t x = start; x < q; ++x) {
            pts[depth] = x;
            choose(depth + 1, x + 1);
        }
    };
    choose(0, 0);
}

TEST(PolynomialHash, PairwiseUniformOverGF7) { exhaustive_uniformity<2>(); }
TEST(PolynomialHash, ThreewiseUniformOverGF7) { exhaustive_uniformity<3>(); }

TEST(PolynomialHash, IndependenceEqualsCoefficientCount)
{
    EXPECT_EQ(PolynomialHash<GF65536>::random(5, 1).independence(), 5u);
}

TEST(ImplicitWeight, Examples)
{
    const std::vector<Constant> ones(3, Constant{true});
    const std::vector<std::uint32_t> none;
    EXPECT_DOUBLE_EQ(implicit_weight<Constant>(0, 0, none, ones, 2.5), 2.5);
    const std::vector<std::uint32_t> all{1, 2, 3};
    EXPECT_DOUBLE_EQ(implicit_weight<Constant>(0, 3, all, ones, 2.5), 2.5);
    EXPECT_DOUBLE_EQ(implicit_weight<Constant>(0, 3, none, ones, 1.0), 64.0);
}

TEST(ImplicitWeight, SievedEdgeDropsToZero)
{
    std::vector<Pattern> bits(3, Pattern{{true, true}});
    bits[1].bits[0] = false;  // round 2 sieves edge 0
    const std::vector<std::uint32_t> none;
    EXPECT_DOUBLE_EQ(implicit_weight<Pattern>(0, 1, none, bits, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(implicit_weight<Pattern>(0, 3, none, bits, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(implicit_weight<Pattern>(1, 3, none, bits, 1.0), 64.0);
    // Membership in round 2 exempts it from that round's sieve.
    const std::vector<std::uint32_t> in2{2};
    EXPECT_DOUBLE_EQ(implicit_weight<Pattern>(0, 3, in2, bits, 1.0), 16.0);
}

TEST(ImplicitWeight, OnlyZeroOrPowerOfFour)
{
    Rng rng(8);
    const KWiseBits r1(4, 1), r2(4, 2), r3(4, 3), r4(4, 4);
    const std::vector<KWiseBits> bits{r1, r2, r3, r4};
    for (EdgeId e = 0; e < 500; ++e) {
        std::vector<std::uint32_t> membership;
        for (std::uint32_t l = 1; l <= 4; ++l)
            if (bernoulli(rng, 0.3))
                membership.push_back(l);
        for (std::size_t round = 0; round <= 4; ++round) {
            const double w = implicit_weight<KWiseBits>(e, round, membership, bits, 1.5);
            const auto k = std::count_if(membership.begin(), membership.end(),
                                         [&](std::uint32_t l) { return l <= round; });
            if (w != 0.0) {
                EXPECT_DOUBLE_EQ(w, 1.5 * std::pow(4.0, static_cast<double>(round) - static_cast<double>(k)));
            }
        }
    }
}
