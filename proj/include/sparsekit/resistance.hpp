#ifndef SPARSEKIT_RESISTANCE_HPP
#define SPARSEKIT_RESISTANCE_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dense.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "linear.hpp"
#include "random.hpp"

namespace sparsekit {

/// Exact effective resistances from a dense pseudoinverse of L_G.
class DenseResistance {
public:
    explicit DenseResistance(const WeightedGraph& g, std::size_t limit = default_dense_limit)
        : pinv_(dense::laplacian_pseudoinverse(g, limit)), comps_(connected_components(g))
    {
    }

    double operator()(NodeId s, NodeId t) const
    {
        if (s >= comps_.label.size() || t >= comps_.label.size())
            throw Error(ErrorCode::BadNodeId, "resistance query out of range");
        if (!comps_.same(s, t))
            throw Error(ErrorCode::DifferentComponents,
                        "nodes " + std::to_string(s) + " and " + std::to_string(t));
        return pinv_(s, s) + pinv_(t, t) - 2 * pinv_(s, t);
    }

    const Eigen::MatrixXd& pseudoinverse() const { return pinv_; }

private:
    Eigen::MatrixXd pinv_;
    Components comps_;
};

inline double exact_resistance(const WeightedGraph& g, NodeId s, NodeId t, std::size_t limit = default_dense_limit)
{
    return DenseResistance(g, limit)(s, t);
}

/// Number of sketch rows ceil(24 log(n) / eps^2).
inline std::size_t sketch_rows(std::size_t n, double epsilon, double log_base = 2.0)
{
    const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2))) / std::log(log_base);
    return static_cast<std::size_t>(std::ceil(24.0 * logn / (epsilon * epsilon) - 1e-9));
}

/// Effective-resistance oracle. In sketch mode Z is q x n and
/// R(s,t) ≈ ||Z(χ_s - χ_t)||^2. In gram mode Z holds L^+ (n x n, from n
/// Laplacian solves) and queries are exact up to solver tolerance.
struct ResistanceOracle {
    enum class Mode { Sketch, Gram };

    Mode mode = Mode::Sketch;
    Eigen::MatrixXd z;
    double epsilon = 0;
    std::uint64_t seed = 0;
    double tol = 1e-8;

    std::size_t rows() const { return static_cast<std::size_t>(z.rows()); }
    std::size_t num_nodes() const { return static_cast<std::size_t>(z.cols()); }

    double query(NodeId s, NodeId t) const
    {
        if (s >= num_nodes() || t >= num_nodes())
            throw Error(ErrorCode::BadNodeId, "resistance query out of range");
        if (s == t)
            return 0.0;
        if (mode == Mode::Gram)
            return std::max(0.0, z(s, s) + z(t, t) - 2 * z(s, t));
        return (z.col(s) - z.col(t)).squaredNorm();
    }
};

/// Johnson-Lindenstrauss sketch of W^{1/2} B L^+: row i solves
/// L z_i = Σ_e s_ie sqrt(w_e) χ_e with random signs s_ie = ±1/sqrt(q).
/// Every row has its own seeded sign stream.
/// With require_connected = false, queries are meaningful within components.
inline ResistanceOracle build_resistance_oracle(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                                double solver_tol = 1e-8, double log_base = 2.0,
                                                bool require_connected = true)
{
    if (!(epsilon > 0 && epsilon <= 1))
        throw Error(ErrorCode::BadEpsilon, "resistance oracle needs 0 < epsilon <= 1");
    if (require_connected && !is_connected(g))
        throw Error(ErrorCode::Disconnected, "resistance oracle needs a connected graph");
    const auto n = g.num_nodes();
    const auto q = sketch_rows(n, epsilon, log_base);
    const double scale = 1.0 / std::sqrt(static_cast<double>(q));
    const auto l = laplacian_matrix(g);

    ResistanceOracle o;
    o.epsilon = epsilon;
    o.seed = seed;
    o.tol = solver_tol;
    o.z.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < q; ++i) {
        Rng rng(derive_seed(seed, {0x2e5, i}));
        std::fill(y.begin(), y.end(), 0.0);
        for (const auto& e : g.edges()) {
            const double s = (rng() >> 63) ? scale : -scale;
            const double c = s * std::sqrt(e.w);
            y[e.u] += c;
            y[e.v] -= c;
        }
        const auto sol = conjugate_gradient(l, y, solver_tol, std::max<std::size_t>(20 * n, 1));
        for (std::size_t v = 0; v < n; ++v)
            o.z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(v)) = sol.x[v];
    }
    return o;
}

/// L^+ column by column through n Laplacian solves; queries read it as a Gram matrix.
inline ResistanceOracle build_gram_resistance_oracle(const WeightedGraph& g, double solver_tol = 1e-10,
                                                     bool require_connected = true)
{
    const auto comps = connected_components(g);
    if (require_connected && comps.count > 1)
        throw Error(ErrorCode::Disconnected, "resistance oracle needs a connected graph");
    const auto n = g.num_nodes();
    const auto l = laplacian_matrix(g);
    ResistanceOracle o;
    o.mode = ResistanceOracle::Mode::Gram;
    o.tol = solver_tol;
    o.z.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        project_mean_zero(e, comps);
        auto sol = conjugate_gradient(l, e, solver_tol, std::max<std::size_t>(20 * n, 1));
        project_mean_zero(sol.x, comps);
        for (std::size_t i = 0; i < n; ++i)
            o.z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sol.x[i];
    }
    return o;
}

/// Expected round-trip time of a random walk: 2 W R.
inline double commute_time(const WeightedGraph& g, double resistance)
{
    return 2.0 * g.total_weight() * resistance;
}

/// Energy j^T L^+ j of the electrical flow routing demand j.
inline double dissipated_power(const WeightedGraph& g, std::span<const double> demand, double tol = 1e-12)
{
    if (demand.size() != g.num_nodes())
        throw Error(ErrorCode::LengthMismatch, "demand length");
    const auto comps = connected_components(g);
    std::vector<double> j(demand.begin(), demand.end());
    if (!is_balanced(project_mean_zero(j, comps), demand))
        throw Error(ErrorCode::UnbalancedDemand, "demand must sum to zero on every component");
    const auto sol = solve_laplacian(g, demand, tol);
    return dot(demand, sol.x);
}

// ---------------------------------------------------------------------------
// Persistence: "SKZ1", u32 header length, JSON header, then rows*cols
// little-endian float64 in row-major order.
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
void put_le(std::ostream& out, T value)
{
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in)
{
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw Error(ErrorCode::ParseError, "truncated oracle file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

} // namespace detail

inline void save_oracle(std::ostream& out, const ResistanceOracle& o)
{
    const nlohmann::json header = {
        {"n", o.num_nodes()},
        {"q", o.rows()},
        {"epsilon", o.epsilon},
        {"seed", o.seed},
        {"tol", o.tol},
        {"mode", o.mode == ResistanceOracle::Mode::Sketch ? "sketch" : "gram"},
    };
    const auto text = header.dump();
    out.write("SKZ1", 4);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (Eigen::Index i = 0; i < o.z.rows(); ++i)
        for (Eigen::Index j = 0; j < o.z.cols(); ++j)
            detail::put_le<double>(out, o.z(i, j));
}

inline ResistanceOracle load_oracle(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "SKZ1")
        throw Error(ErrorCode::ParseError, "not a resistance oracle file");
    const auto len = detail::get_le<std::uint32_t>(in);
    std::string text(len, '\0');
    if (!in.read(text.data(), len))
        throw Error(ErrorCode::ParseError, "truncated oracle header");
    const auto header = nlohmann::json::parse(text);
    ResistanceOracle o;
    o.epsilon = header.at("epsilon").get<double>();
    o.seed = header.at("seed").get<std::uint64_t>();
    o.tol = header.at("tol").get<double>();
    o.mode = header.value("mode", "sketch") == "gram" ? ResistanceOracle::Mode::Gram : ResistanceOracle::Mode::Sketch;
    const auto q = header.at("q").get<Eigen::Index>();
    const auto n = header.at("n").get<Eigen::Index>();
    o.z.resize(q, n);
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            o.z(i, j) = detail::get_le<double>(in);
    return o;
}

} // namespace sparsekit

#endif // SPARSEKIT_RESISTANCE_HPP
