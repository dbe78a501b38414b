#ifndef SPARSEKIT_ORACLE_HPP
#define SPARSEKIT_ORACLE_HPP

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "random.hpp"

namespace sparsekit {

// ---------------------------------------------------------------------------
// Query cost accounting
// ---------------------------------------------------------------------------

/// Modeled cost of finding all |S| marked items among N by repeated Grover
/// search: sqrt(N * max(|S|, 1)). Polylogarithmic factors are dropped.
inline double grover_cost(double n_items, double n_marked)
{
    return std::sqrt(n_items * std::max(n_marked, 1.0));
}

/// Classical queries actually made, next to the modeled quantum query count
/// of the same work. Ledgers from independent tasks combine with +=.
struct CostLedger {
    std::uint64_t classical_queries = 0;
    double modeled_quantum_queries = 0;

    /// A search over n_items that a classical scan answers with n_items
    /// queries and repeated Grover search with grover_cost(n_items, n_marked).
    void record_search(std::uint64_t n_items, double n_marked)
    {
        classical_queries += n_items;
        modeled_quantum_queries += grover_cost(static_cast<double>(n_items), n_marked);
    }

    void record_modeled(double cost) { modeled_quantum_queries += cost; }
    void record_classical(std::uint64_t count) { classical_queries += count; }

    CostLedger& operator+=(const CostLedger& other)
    {
        classical_queries += other.classical_queries;
        modeled_quantum_queries += other.modeled_quantum_queries;
        return *this;
    }

    friend CostLedger operator+(CostLedger a, const CostLedger& b) { return a += b; }
};

/// Counts every adjacency-list access made through it. One counter per
/// kind of query; each call bumps exactly one of them. Counters are not
/// synchronized, so an oracle belongs to a single run.
template <GraphView G>
class QueryOracle {
public:
    explicit QueryOracle(const G& graph) : graph_(&graph) {}

    std::size_t num_nodes() const { return graph_->num_nodes(); }

    std::size_t degree(NodeId v) const
    {
        check_node(v);
        ++degree_queries_;
        return graph_->degree(v);
    }

    Neighbor neighbor(NodeId v, std::size_t k) const
    {
        check_node(v);
        if (k >= graph_->degree(v))
            throw Error(ErrorCode::IndexOutOfRange,
                        "neighbor " + std::to_string(k) + " of node " + std::to_string(v));
        ++neighbor_queries_;
        return graph_->neighbor(v, k);
    }

    double weight(NodeId v, std::size_t k) const
    {
        check_node(v);
        if (k >= graph_->degree(v))
            throw Error(ErrorCode::IndexOutOfRange,
                        "weight of neighbor " + std::to_string(k) + " of node " + std::to_string(v));
        ++weight_queries_;
        return graph_->neighbor(v, k).weight;
    }

    std::uint64_t degree_queries() const { return degree_queries_; }
    std::uint64_t neighbor_queries() const { return neighbor_queries_; }
    std::uint64_t weight_queries() const { return weight_queries_; }
    std::uint64_t total_queries() const { return degree_queries_ + neighbor_queries_ + weight_queries_; }

    const G& graph() const { return *graph_; }

private:
    void check_node(NodeId v) const
    {
        if (v >= graph_->num_nodes())
            throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(v));
    }

    const G* graph_;
    mutable std::uint64_t degree_queries_ = 0;
    mutable std::uint64_t neighbor_queries_ = 0;
    mutable std::uint64_t weight_queries_ = 0;
};

// ---------------------------------------------------------------------------
// Finite fields for polynomial hashing
// ---------------------------------------------------------------------------

/// GF(2^16) modulo x^16 + x^12 + x^3 + x + 1, with log/antilog tables.
struct GF65536 {
    using value_type = std::uint32_t;
    static constexpr std::uint32_t size = 1u << 16;
    static constexpr std::uint32_t modulus = 0x1100B;

    static value_type add(value_type a, value_type b) noexcept { return a ^ b; }

    static value_type mul(value_type a, value_type b) noexcept
    {
        if (a == 0 || b == 0)
            return 0;
        const auto& t = tables();
        return t.exp[t.log[a] + t.log[b]];
    }

    /// Shift-and-add product without tables; used to cross-check them.
    static value_type mul_slow(value_type a, value_type b) noexcept
    {
        value_type r = 0;
        while (b) {
            if (b & 1)
                r ^= a;
            b >>= 1;
            a <<= 1;
            if (a & size)
                a ^= modulus;
        }
        return r;
    }

    static value_type from_uint(std::uint64_t x) noexcept { return static_cast<value_type>(x % size); }

    struct Tables {
        std::vector<std::uint16_t> exp;  // doubled so log a + log b needs no reduction
        std::vector<std::uint32_t> log;
        bool primitive = true;
    };

    static const Tables& tables()
    {
        static const Tables t = [] {
            Tables t;
            t.exp.resize(2 * (size - 1));
            t.log.assign(size, 0);
            std::vector<bool> seen(size, false);
            value_type x = 1;
            for (std::uint32_t i = 0; i < size - 1; ++i) {
                if (seen[x])
                    t.primitive = false;
                seen[x] = true;
                t.exp[i] = static_cast<std::uint16_t>(x);
                t.log[x] = i;
                x = mul_slow(x, 2);
            }
            for (std::uint32_t i = size - 1; i < 2 * (size - 1); ++i)
                t.exp[i] = t.exp[i - (size - 1)];
            return t;
        }();
        return t;
    }
};

/// Integers modulo a small prime; the exhaustive-enumeration harness uses it.
template <std::uint32_t P>
struct PrimeField {
    using value_type = std::uint32_t;
    static constexpr std::uint32_t size = P;

    static value_type add(value_type a, value_type b) noexcept { return (a + b) % P; }
    static value_type mul(value_type a, value_type b) noexcept
    {
        return static_cast<value_type>((std::uint64_t{a} * b) % P);
    }
    static value_type from_uint(std::uint64_t x) noexcept { return static_cast<value_type>(x % P); }
};

template <class F>
concept FiniteField = requires(typename F::value_type a, std::uint64_t x) {
    { F::size } -> std::convertible_to<std::uint32_t>;
    { F::add(a, a) } -> std::same_as<typename F::value_type>;
    { F::mul(a, a) } -> std::same_as<typename F::value_type>;
    { F::from_uint(x) } -> std::same_as<typename F::value_type>;
};

/// Random polynomial of degree k-1 over F: any k distinct points map to
/// jointly uniform values when the coefficients are uniform.
template <FiniteField F>
class PolynomialHash {
public:
    using value_type = typename F::value_type;

    explicit PolynomialHash(std::vector<value_type> coefficients) : coefficients_(std::move(coefficients)) {}

    static PolynomialHash random(std::size_t k, std::uint64_t seed)
    {
        Rng rng(seed);
        std::vector<value_type> c(k);
        for (auto& x : c)
            x = static_cast<value_type>(uniform_below(rng, F::size));
        return PolynomialHash(std::move(c));
    }

    std::size_t independence() const noexcept { return coefficients_.size(); }

    value_type operator()(value_type x) const noexcept
    {
        value_type acc = 0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
            acc = F::add(F::mul(acc, x), *it);
        return acc;
    }

private:
    std::vector<value_type> coefficients_;
};

/// Deterministic bit per 64-bit index.
template <class B>
concept BitSource = requires(const B& b, std::uint64_t index) {
    { b.bit(index) } -> std::convertible_to<bool>;
};

/// k-wise independent bit string over 64-bit indices, each bit 1 with
/// probability threshold / 2^16 (default 1/4).
class KWiseBits {
public:
    static constexpr std::uint32_t default_threshold = 1u << 14;

    KWiseBits(std::size_t k, std::uint64_t seed, std::uint32_t threshold = default_threshold)
        : hash_(PolynomialHash<GF65536>::random(std::max<std::size_t>(k, 1), seed)), seed_(seed),
          threshold_(threshold)
    {
    }

    /// Injective on [0, 2^16); higher index bits are folded in through a mix.
    static std::uint32_t field_element(std::uint64_t index) noexcept
    {
        return static_cast<std::uint32_t>((index ^ splitmix64(index >> 16)) & 0xFFFFu);
    }

    bool bit(std::uint64_t index) const noexcept { return hash_(field_element(index)) < threshold_; }

    std::size_t independence() const noexcept { return hash_.independence(); }
    std::uint64_t seed() const noexcept { return seed_; }
    double probability() const noexcept { return static_cast<double>(threshold_) / GF65536::size; }

private:
    PolynomialHash<GF65536> hash_;
    std::uint64_t seed_;
    std::uint32_t threshold_;
};

/// Fully mixed reference source: every index hashed independently by a
/// 64-bit mixer. Stands in for a truly random string.
class MixedBits {
public:
    explicit MixedBits(std::uint64_t seed, std::uint32_t threshold = KWiseBits::default_threshold)
        : seed_(seed), threshold_(threshold)
    {
    }

    bool bit(std::uint64_t index) const noexcept
    {
        return (splitmix64(seed_ ^ splitmix64(index)) >> 48) < threshold_;
    }

private:
    std::uint64_t seed_;
    std::uint32_t threshold_;
};

/// Weight of edge e after `round` rounds of implicit sparsification.
/// `membership` lists (ascending) the rounds whose spanner packing contains
/// e; `bits[l-1]` is the sieve string of round l. The weight is
/// 4^(round - k) * base_w when every sieve bit since the last membership is
/// 1 (k memberships up to `round`), and 0 otherwise.
template <BitSource B>
double implicit_weight(EdgeId e, std::size_t round, std::span<const std::uint32_t> membership,
                       std::span<const B> bits, double base_w)
{
    std::size_t k = 0;
    std::size_t last = 0;
    for (auto r : membership) {
        if (r > round)
            break;
        ++k;
        last = r;
    }
    for (std::size_t l = last + 1; l <= round; ++l)
        if (!bits[l - 1].bit(e))
            return 0.0;
    return std::ldexp(base_w, 2 * static_cast<int>(round - k));
}

} // namespace sparsekit

#endif // SPARSEKIT_ORACLE_HPP
