#ifndef SPARSEKIT_SPARSIFY_HPP
#define SPARSEKIT_SPARSIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dense.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "resistance.hpp"
#include "spanner.hpp"

namespace sparsekit {

struct Provenance {
    std::string method;
    std::uint64_t seed = 0;
    double epsilon = 0;
    std::size_t rounds = 0;  // T for ks; 1 for half
    double c_pack = 0;
    double big_c = 0;        // resistance-sampling constant C
    double log_base = 2;
    std::size_t packing_count = 0;             // r per round
    std::vector<std::size_t> packing_sizes{};  // |P_i| per round
    std::size_t kwise_independence = 0;
    bool fallback_to_input = false;            // rough stage was not sparser than G
    std::vector<std::string> warnings{};
};

/// Reweighted subgraph of G: (edge id in G, new weight), sorted by edge id.
struct Sparsifier {
    std::size_t num_nodes = 0;
    std::vector<std::pair<EdgeId, double>> edges;
    Provenance provenance;
    CostLedger ledger;

    std::size_t size() const { return edges.size(); }

    WeightedGraph to_graph(const WeightedGraph& g) const
    {
        std::vector<RawEdge> raw;
        raw.reserve(edges.size());
        for (const auto& [id, w] : edges)
            raw.push_back({g.edge(id).u, g.edge(id).v, w});
        return build_graph(g.num_nodes(), raw);
    }
};

inline Sparsifier identity_sparsifier(const WeightedGraph& g)
{
    Sparsifier h;
    h.num_nodes = g.num_nodes();
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (g.edge(e).w > 0)
            h.edges.emplace_back(e, g.edge(e).w);
    return h;
}

inline double log_in_base(double x, double base)
{
    return std::log(x) / std::log(base);
}

struct PackingOptions {
    double c_pack = 1.0;     // r = ceil(c_pack log^2(n) / eps^2)
    double log_base = 2.0;
    std::size_t levels = 0;  // spanner k; 0 picks ceil(log_base n)
};

inline std::size_t packing_count(std::size_t n, double epsilon, const PackingOptions& opt)
{
    const double logn = log_in_base(static_cast<double>(std::max<std::size_t>(n, 2)), opt.log_base);
    const double r = std::ceil(opt.c_pack * logn * logn / (epsilon * epsilon) - 1e-9);
    return static_cast<std::size_t>(std::max(1.0, r));
}

inline void check_epsilon(double epsilon)
{
    if (!(epsilon > 0 && epsilon <= 1))
        throw Error(ErrorCode::BadEpsilon, "epsilon must lie in (0, 1], got " + std::to_string(epsilon));
}

/// One halving step: keep an O(log^2 n / eps^2)-packing of spanners intact
/// and every other edge independently with probability 1/4 at weight 4w.
inline Sparsifier half_sparsify(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                const PackingOptions& opt = {})
{
    check_epsilon(epsilon);
    const auto n = g.num_nodes();
    Sparsifier h;
    h.num_nodes = n;
    h.provenance = {.method = "half", .seed = seed, .epsilon = epsilon, .rounds = 1, .c_pack = opt.c_pack,
                    .log_base = opt.log_base};
    const auto r = packing_count(n, epsilon, opt);
    const auto k = opt.levels ? opt.levels : default_spanner_levels(n, opt.log_base);
    QueryOracle<WeightedGraph> access(g);
    const auto packing = spanner_packing(access, r, k, derive_seed(seed, {1}), &h.ledger);
    std::vector<bool> packed(g.num_edges(), false);
    std::size_t packed_count = 0;
    for (auto e : packing.union_edges()) {
        packed[e] = true;
        ++packed_count;
    }
    h.provenance.packing_count = r;
    h.provenance.packing_sizes = {packed_count};

    Rng rng(derive_seed(seed, {2}));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const double w = g.edge(e).w;
        if (w <= 0)
            continue;
        if (packed[e])
            h.edges.emplace_back(e, w);
        else if (bernoulli(rng, 0.25))
            h.edges.emplace_back(e, 4 * w);
    }
    return h;
}

enum class SieveSource { KWise, Mixed };

struct KsOptions {
    PackingOptions packing;
    std::size_t max_independence = 1024;  // cap on the k of the k-wise sieves
    SieveSource source = SieveSource::KWise;
};

/// T = ceil(log2(m/n)), at least 1; 0 when m <= n.
inline std::size_t ks_round_count(std::size_t n, std::size_t m)
{
    if (m <= n)
        return 0;
    const double t = std::ceil(std::log2(static_cast<double>(m) / static_cast<double>(n)) - 1e-12);
    return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

namespace detail {

// Memoizes each sieve bit on first read.
template <BitSource B>
class CachedBits {
public:
    CachedBits(B bits, std::size_t capacity) : bits_(std::move(bits)), cache_(capacity, -1) {}

    bool bit(std::uint64_t index) const
    {
        auto& c = cache_[index];
        if (c < 0) {
            c = bits_.bit(index) ? 1 : 0;
            ++reads_;
        }
        return c == 1;
    }

    std::uint64_t distinct_reads() const { return reads_; }

private:
    B bits_;
    mutable std::vector<std::int8_t> cache_;
    mutable std::uint64_t reads_ = 0;
};

// G with every weight replaced by its implicit weight after `round` rounds.
template <BitSource B>
class ImplicitWeightView {
public:
    ImplicitWeightView(const WeightedGraph& g, const std::vector<std::vector<std::uint32_t>>& membership,
                       std::span<const CachedBits<B>> sieves, std::size_t round)
        : g_(&g), membership_(&membership), sieves_(sieves), round_(round)
    {
    }

    std::size_t num_nodes() const { return g_->num_nodes(); }
    std::size_t degree(NodeId v) const { return g_->degree(v); }
    Neighbor neighbor(NodeId v, std::size_t k) const
    {
        auto nb = g_->neighbor(v, k);
        nb.weight = weight(nb.edge);
        return nb;
    }

    double weight(EdgeId e) const
    {
        return implicit_weight<CachedBits<B>>(e, round_, (*membership_)[e], sieves_, g_->edge(e).w);
    }

private:
    const WeightedGraph* g_;
    const std::vector<std::vector<std::uint32_t>>* membership_;
    std::span<const CachedBits<B>> sieves_;
    std::size_t round_;
};

template <BitSource B, class MakeBits>
Sparsifier ks_rounds(const WeightedGraph& g, double epsilon, std::uint64_t seed, const KsOptions& opt,
                     MakeBits&& make_bits)
{
    const auto n = g.num_nodes();
    const auto m = g.num_edges();
    Sparsifier h;
    h.num_nodes = n;
    h.provenance = {.method = "ks", .seed = seed, .epsilon = epsilon, .c_pack = opt.packing.c_pack,
                    .log_base = opt.packing.log_base};
    if (m <= n) {
        auto id = identity_sparsifier(g);
        id.provenance = h.provenance;
        return id;
    }
    if (epsilon < std::sqrt(static_cast<double>(n) / static_cast<double>(m)))
        h.provenance.warnings.push_back("EpsilonTooSmall: epsilon below sqrt(n/m); no sparsification is possible");

    const auto rounds = ks_round_count(n, m);
    const double eps_round = epsilon / (2.0 * static_cast<double>(rounds));
    const auto r = packing_count(n, eps_round, opt.packing);
    const auto k = opt.packing.levels ? opt.packing.levels : default_spanner_levels(n, opt.packing.log_base);
    h.provenance.rounds = rounds;
    h.provenance.packing_count = r;

    std::vector<CachedBits<B>> sieves;
    sieves.reserve(rounds);
    for (std::size_t l = 1; l <= rounds; ++l)
        sieves.emplace_back(make_bits(derive_seed(seed, {0x51e4e, l})), m);
    std::vector<std::vector<std::uint32_t>> membership(m);

    for (std::size_t i = 1; i <= rounds; ++i) {
        ImplicitWeightView<B> view(g, membership, std::span<const CachedBits<B>>(sieves.data(), i - 1), i - 1);
        const auto packing = spanner_packing(view, r, k, derive_seed(seed, {0xbac, i}), &h.ledger);
        const auto packed = packing.union_edges();
        for (auto e : packed)
            membership[e].push_back(static_cast<std::uint32_t>(i));
        h.provenance.packing_sizes.push_back(packed.size());
    }

    ImplicitWeightView<B> final_view(g, membership, sieves, rounds);
    for (EdgeId e = 0; e < m; ++e) {
        const double w = final_view.weight(e);
        if (w > 0)
            h.edges.emplace_back(e, w);
    }
    h.ledger.record_search(m, static_cast<double>(h.edges.size()));
    return h;
}

} // namespace detail

/// Iterated halving with implicit weights: T = ceil(log2(m/n)) rounds at
/// eps/(2T), each packing built against the weights implied by earlier
/// packings and the round sieves; survivors are extracted once at the end.
/// Sieve bits come from k-wise independent strings with
/// k = min(2 T m, max_independence), or from a fully mixed hash.
inline Sparsifier ks_sparsify(const WeightedGraph& g, double epsilon, std::uint64_t seed, const KsOptions& opt = {})
{
    check_epsilon(epsilon);
    const auto m = g.num_edges();
    const auto reads = ks_round_count(g.num_nodes(), m) * m;  // distinct sieve bits a run can touch
    const auto k = std::clamp<std::size_t>(2 * reads, 1, std::max<std::size_t>(opt.max_independence, 1));
    if (opt.source == SieveSource::Mixed) {
        auto h = detail::ks_rounds<MixedBits>(g, epsilon, seed, opt, [](std::uint64_t s) { return MixedBits(s); });
        h.provenance.kwise_independence = 0;
        return h;
    }
    auto h = detail::ks_rounds<KWiseBits>(g, epsilon, seed, opt, [k](std::uint64_t s) { return KWiseBits(k, s); });
    h.provenance.kwise_independence = k;
    return h;
}

/// Keeps each edge with probability p_e = min(1, C w_e R_e log(n) / eps^2)
/// at weight w_e / p_e.
inline Sparsifier resistance_sample(const WeightedGraph& g, std::span<const double> estimates, double epsilon,
                                    double big_c, std::uint64_t seed, double log_base = 2.0)
{
    check_epsilon(epsilon);
    if (estimates.size() != g.num_edges())
        throw Error(ErrorCode::LengthMismatch, "one resistance estimate per edge expected");
    for (double r : estimates)
        if (!(r > 0) || !std::isfinite(r))
            throw Error(ErrorCode::BadEstimate, "resistance estimates must be positive and finite");
    const auto n = g.num_nodes();
    const double factor = big_c * log_in_base(static_cast<double>(std::max<std::size_t>(n, 2)), log_base) /
                          (epsilon * epsilon);
    Sparsifier h;
    h.num_nodes = n;
    h.provenance = {.method = "resistance", .seed = seed, .epsilon = epsilon, .big_c = big_c, .log_base = log_base};
    Rng rng(derive_seed(seed, {0x5a4b}));
    double expected = 0;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const double w = g.edge(e).w;
        const double p = std::min(1.0, factor * w * estimates[e]);
        expected += p;
        const double u = uniform01(rng);
        if (p > 0 && u < p)
            h.edges.emplace_back(e, w / p);
    }
    h.ledger.record_search(g.num_edges(), expected);
    return h;
}

struct RefinedOptions {
    KsOptions rough;
    double eps_rough = 0.01;
    double eps_oracle = 0.01;
    double big_c = 4.0;
    double oracle_tol = 1e-8;
    double log_base = 2.0;
};

struct ResistanceEstimates {
    std::vector<double> per_edge;  // estimate of R_e for every edge of G
    Sparsifier rough;              // stage-1 output
    bool fallback = false;         // estimates were taken on G itself
    ResistanceOracle::Mode mode = ResistanceOracle::Mode::Sketch;
    std::size_t oracle_rows = 0;
    std::vector<std::string> warnings{};
};

/// Stages 1-2 of the refined pipeline: a rough sparsifier of G, and a
/// resistance oracle on it queried at every edge of G. When the sketch
/// would need at least n rows, L^+ of the rough graph is formed from n
/// solves instead.
inline ResistanceEstimates refined_resistance_estimates(const WeightedGraph& g, std::uint64_t seed,
                                                        const RefinedOptions& opt = {})
{
    ResistanceEstimates est;
    est.rough = ks_sparsify(g, opt.eps_rough, derive_seed(seed, {1}), opt.rough);
    WeightedGraph base;
    if (est.rough.size() >= g.num_edges()) {
        est.fallback = true;
        est.warnings.push_back("rough sparsifier is not sparser than the input; estimating on the input graph");
        base = g;
    } else {
        base = est.rough.to_graph(g);
        if (connected_components(base).count != connected_components(g).count) {
            est.fallback = true;
            est.warnings.push_back("rough sparsifier disconnected; estimating on the input graph");
            base = g;
        }
    }
    const auto n = g.num_nodes();
    const auto q = sketch_rows(n, opt.eps_oracle, opt.log_base);
    ResistanceOracle oracle;
    if (q < n) {
        oracle = build_resistance_oracle(base, opt.eps_oracle, derive_seed(seed, {2}), opt.oracle_tol, opt.log_base,
                                         false);
    } else {
        oracle = build_gram_resistance_oracle(base, std::min(opt.oracle_tol, 1e-10), false);
    }
    est.mode = oracle.mode;
    est.oracle_rows = oracle.rows();
    est.per_edge.resize(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        est.per_edge[e] = oracle.query(g.edge(e).u, g.edge(e).v);
    return est;
}

/// Rough sparsifier -> resistance estimates -> resistance sampling on the
/// original graph.
inline Sparsifier refined_sparsify(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                   const RefinedOptions& opt = {})
{
    check_epsilon(epsilon);
    auto est = refined_resistance_estimates(g, seed, opt);
    auto h = resistance_sample(g, est.per_edge, epsilon, opt.big_c, derive_seed(seed, {3}), opt.log_base);
    h.ledger += est.rough.ledger;
    h.provenance.method = "refined";
    h.provenance.seed = seed;
    h.provenance.rounds = est.rough.provenance.rounds;
    h.provenance.c_pack = opt.rough.packing.c_pack;
    h.provenance.packing_count = est.rough.provenance.packing_count;
    h.provenance.packing_sizes = est.rough.provenance.packing_sizes;
    h.provenance.kwise_independence = est.rough.provenance.kwise_independence;
    h.provenance.fallback_to_input = est.fallback;
    for (const auto& w : est.rough.provenance.warnings)
        h.provenance.warnings.push_back("rough stage: " + w);
    h.provenance.warnings.insert(h.provenance.warnings.end(), est.warnings.begin(), est.warnings.end());
    return h;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct SpectralReport {
    double lambda_min = 1;
    double lambda_max = 1;
    bool pass = true;
};

inline constexpr double verify_slack = 1e-9;

inline void check_same_components(const WeightedGraph& g, const WeightedGraph& h)
{
    if (g.num_nodes() != h.num_nodes())
        throw Error(ErrorCode::ComponentMismatch, "node counts differ");
    const auto cg = connected_components(g);
    const auto ch = connected_components(h);
    if (cg.count != ch.count)
        throw Error(ErrorCode::ComponentMismatch, "G has " + std::to_string(cg.count) + " components, H has " +
                                                      std::to_string(ch.count));
    std::vector<std::uint32_t> map(cg.count, UINT32_MAX);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        auto& slot = map[cg.label[v]];
        if (slot == UINT32_MAX)
            slot = ch.label[v];
        else if (slot != ch.label[v])
            throw Error(ErrorCode::ComponentMismatch, "component of node " + std::to_string(v) + " differs");
    }
}

/// Extreme eigenvalues of L_G^{+/2} L_H L_G^{+/2} on the range of L_G.
inline SpectralReport verify_spectral(const WeightedGraph& g, const WeightedGraph& h, double epsilon,
                                      std::size_t limit = default_dense_limit)
{
    check_dense(g.num_nodes(), limit);
    check_same_components(g, h);
    SpectralReport rep;
    const auto lambda = dense::pencil_eigenvalues(dense_laplacian(g, limit), dense_laplacian(h, limit));
    if (lambda.size() > 0) {
        rep.lambda_min = lambda.minCoeff();
        rep.lambda_max = lambda.maxCoeff();
    }
    rep.pass = rep.lambda_min >= 1 - epsilon - verify_slack && rep.lambda_max <= 1 + epsilon + verify_slack;
    return rep;
}

struct CutReport {
    std::size_t checked = 0;
    std::size_t passed = 0;
    double fraction() const { return checked ? static_cast<double>(passed) / static_cast<double>(checked) : 1.0; }
};

/// All singleton cuts plus `trials` uniformly random nonempty proper subsets.
inline CutReport verify_cuts(const WeightedGraph& g, const WeightedGraph& h, double epsilon, std::size_t trials,
                             std::uint64_t seed)
{
    if (trials < 1)
        throw Error(ErrorCode::BadShape, "verify_cuts needs at least one trial");
    if (g.num_nodes() != h.num_nodes())
        throw Error(ErrorCode::LengthMismatch, "graphs on different node sets");
    const auto n = g.num_nodes();
    CutReport rep;
    if (n < 2)
        return rep;
    auto within = [&](const std::vector<bool>& in_s) {
        const Cut s = Cut::from_indicator(in_s);
        const double vg = cut_value(g, s);
        const double vh = cut_value(h, s);
        return std::abs(vh - vg) <= epsilon * vg + verify_slack * std::max(vg, 1.0);
    };
    std::vector<bool> in_s(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        in_s[v] = true;
        ++rep.checked;
        rep.passed += within(in_s);
        in_s[v] = false;
    }
    Rng rng(derive_seed(seed, {0xc475}));
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t count;
        do {
            count = 0;
            for (std::size_t v = 0; v < n; ++v) {
                in_s[v] = (rng() >> 63) != 0;
                count += in_s[v];
            }
        } while (count == 0 || count == n);
        ++rep.checked;
        rep.passed += within(in_s);
    }
    return rep;
}

} // namespace sparsekit

#endif // SPARSEKIT_SPARSIFY_HPP
