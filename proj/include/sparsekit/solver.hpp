#ifndef SPARSEKIT_SOLVER_HPP
#define SPARSEKIT_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "graph.hpp"
#include "linear.hpp"
#include "random.hpp"
#include "sparsify.hpp"

namespace sparsekit {

// ---------------------------------------------------------------------------
// Symmetric diagonally dominant systems
// ---------------------------------------------------------------------------

/// A = D + P + N: diagonal, positive off-diagonal and negative off-diagonal
/// parts.
struct SddParts {
    std::vector<double> diagonal;
    std::vector<SparseMatrix::Triplet> positive;
    std::vector<SparseMatrix::Triplet> negative;
};

inline SddParts decompose(const SparseMatrix& a)
{
    SddParts parts;
    parts.diagonal.assign(a.size(), 0.0);
    for (const auto& t : a.triplets()) {
        if (t.row == t.col)
            parts.diagonal[t.row] = t.value;
        else if (t.value > 0)
            parts.positive.push_back(t);
        else if (t.value < 0)
            parts.negative.push_back(t);
    }
    return parts;
}

inline bool is_symmetric(const SparseMatrix& a, double rel_tol = 1e-12)
{
    for (const auto& t : a.triplets()) {
        const double other = a.at(t.col, t.row);
        if (std::abs(t.value - other) > rel_tol * std::max(std::abs(t.value), std::abs(other)))
            return false;
    }
    return true;
}

inline bool is_diagonally_dominant(const SparseMatrix& a, double rel_tol = 1e-12)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diag = 0, off = 0;
        a.for_each_in_row(i, [&](std::size_t j, double v) {
            if (j == i)
                diag = v;
            else
                off += std::abs(v);
        });
        if (diag < off - rel_tol * (std::abs(diag) + off))
            return false;
    }
    return true;
}

inline bool is_sdd(const SparseMatrix& a)
{
    return is_symmetric(a) && is_diagonally_dominant(a);
}

/// SDD with no positive off-diagonal entries.
inline bool is_sddm(const SparseMatrix& a)
{
    return is_sdd(a) && decompose(a).positive.empty();
}

struct SddSystem {
    SparseMatrix a;
    std::vector<double> b;

    SddSystem(SparseMatrix matrix, std::vector<double> rhs) : a(std::move(matrix)), b(std::move(rhs))
    {
        if (b.size() != a.size())
            throw Error(ErrorCode::LengthMismatch, "right-hand side length");
        if (!is_sdd(a))
            throw Error(ErrorCode::NotSDD, "matrix is not symmetric diagonally dominant");
    }
};

/// The doubled SDDM system [[D+N, -P], [-P, D+N]] with right-hand side
/// [b; -b]. A solution z of A z = b is (z1 - z2) / 2.
struct GrembanSystem {
    SparseMatrix a;
    std::vector<double> b;

    std::vector<double> recover(std::span<const double> z) const
    {
        const auto n = b.size() / 2;
        if (z.size() != 2 * n)
            throw Error(ErrorCode::LengthMismatch, "doubled solution length");
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = 0.5 * (z[i] - z[n + i]);
        return x;
    }
};

inline GrembanSystem gremban_reduce(const SddSystem& sys)
{
    const auto n = sys.a.size();
    const auto parts = decompose(sys.a);
    std::vector<SparseMatrix::Triplet> entries;
    entries.reserve(2 * (n + parts.positive.size() + parts.negative.size()));
    for (std::size_t i = 0; i < n; ++i) {
        if (parts.diagonal[i] != 0) {
            entries.push_back({i, i, parts.diagonal[i]});
            entries.push_back({n + i, n + i, parts.diagonal[i]});
        }
    }
    for (const auto& t : parts.negative) {
        entries.push_back({t.row, t.col, t.value});
        entries.push_back({n + t.row, n + t.col, t.value});
    }
    for (const auto& t : parts.positive) {
        entries.push_back({t.row, n + t.col, -t.value});
        entries.push_back({n + t.row, t.col, -t.value});
    }
    GrembanSystem out;
    out.a = SparseMatrix::from_triplets(2 * n, std::move(entries));
    out.b.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.b[i] = sys.b[i];
        out.b[n + i] = -sys.b[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// SDDM sparsification
// ---------------------------------------------------------------------------

/// Graph whose Laplacian carries the off-diagonal part of an SDDM matrix.
inline WeightedGraph sddm_graph(const SparseMatrix& a)
{
    std::vector<RawEdge> raw;
    for (const auto& t : a.triplets())
        if (t.col > t.row && t.value < 0)
            raw.push_back({static_cast<NodeId>(t.row), static_cast<NodeId>(t.col), -t.value});
    return build_graph(a.size(), raw);
}

struct SddmSparsifier {
    SparseMatrix matrix;
    Sparsifier sparsifier;
};

/// Sparsifies the Laplacian part of an SDDM matrix and keeps its diagonal,
/// so the excess over the sparsified Laplacian stays nonnegative.
inline SddmSparsifier sddm_sparsify(const SparseMatrix& a, double epsilon, std::uint64_t seed,
                                    const RefinedOptions& opt = {})
{
    if (!is_sddm(a))
        throw Error(ErrorCode::NotSDDM, "matrix is not SDDM");
    check_epsilon(epsilon);
    const auto g = sddm_graph(a);
    SddmSparsifier out;
    out.sparsifier = g.num_edges() == 0 ? identity_sparsifier(g) : refined_sparsify(g, epsilon, seed, opt);
    const auto diag = a.diagonal();
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (diag[i] != 0)
            entries.push_back({i, i, diag[i]});
    for (const auto& [id, w] : out.sparsifier.edges) {
        const auto& e = g.edge(id);
        entries.push_back({e.u, e.v, -w});
        entries.push_back({e.v, e.u, -w});
    }
    out.matrix = SparseMatrix::from_triplets(a.size(), std::move(entries));
    return out;
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

struct SparsifiedSolve {
    SolveResult result;
    Sparsifier sparsifier;
};

/// Solves L_G x = b on a refined sparsifier of G.
inline SparsifiedSolve solve_via_sparsifier(const WeightedGraph& g, std::span<const double> b, double epsilon,
                                            std::uint64_t seed, const RefinedOptions& opt = {},
                                            double tol = 1e-12)
{
    if (b.size() != g.num_nodes())
        throw Error(ErrorCode::LengthMismatch, "right-hand side length");
    SparsifiedSolve out;
    out.sparsifier = refined_sparsify(g, epsilon, seed, opt);
    out.result = solve_laplacian(out.sparsifier.to_graph(g), b, tol);
    return out;
}

struct SddSolve {
    SolveResult result;
    Sparsifier sparsifier;
};

/// Gremban reduction, SDDM sparsification, conjugate gradient on the
/// sparsified system and recovery. The reported residual is measured on A.
inline SddSolve sdd_solve(const SddSystem& sys, double epsilon, std::uint64_t seed, const RefinedOptions& opt = {},
                          double tol = 1e-12)
{
    const auto reduced = gremban_reduce(sys);
    auto sparse = sddm_sparsify(reduced.a, epsilon, seed, opt);
    const auto n2 = reduced.a.size();
    auto inner = conjugate_gradient(sparse.matrix, reduced.b, tol, std::max<std::size_t>(20 * n2, 1));
    SddSolve out;
    out.sparsifier = std::move(sparse.sparsifier);
    out.result.x = reduced.recover(inner.x);
    out.result.iterations = inner.iterations;
    out.result.converged = inner.converged;
    out.result.residual = relative_residual(sys.a, out.result.x, sys.b);
    return out;
}

// ---------------------------------------------------------------------------
// Bottom eigenpairs
// ---------------------------------------------------------------------------

struct EigenPairs {
    std::vector<double> values;                // nondecreasing
    std::vector<std::vector<double>> vectors;  // orthonormal
    std::size_t iterations = 0;
    Sparsifier sparsifier;
};

namespace detail {

inline Eigen::MatrixXd component_kernel(const Components& comps, std::size_t n)
{
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), comps.count);
    for (std::size_t v = 0; v < n; ++v)
        k(static_cast<Eigen::Index>(v), comps.label[v]) = 1.0;
    for (Eigen::Index c = 0; c < k.cols(); ++c)
        k.col(c).normalize();
    return k;
}

inline Eigen::MatrixXd orthonormalize_against(const Eigen::MatrixXd& x, const Eigen::MatrixXd& kernel)
{
    Eigen::MatrixXd y = x - kernel * (kernel.transpose() * x);
    y -= kernel * (kernel.transpose() * y);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

inline Eigen::MatrixXd apply(const SparseMatrix& a, const Eigen::MatrixXd& x)
{
    Eigen::MatrixXd y(x.rows(), x.cols());
    std::vector<double> in(static_cast<std::size_t>(x.rows())), out(in.size());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        Eigen::VectorXd::Map(in.data(), x.rows()) = x.col(c);
        a.multiply(in, out);
        y.col(c) = Eigen::VectorXd::Map(out.data(), x.rows());
    }
    return y;
}

} // namespace detail

/// The k smallest eigenpairs of the Laplacian of a sparsifier built at
/// epsilon / 10. Kernel vectors come from the components; the rest from
/// block inverse iteration with Rayleigh-Ritz.
inline EigenPairs bottom_eigs(const WeightedGraph& g, std::size_t k, double epsilon, std::uint64_t seed,
                              const RefinedOptions& opt = {}, std::size_t max_iterations = 500)
{
    const auto n = g.num_nodes();
    if (k >= n)
        throw Error(ErrorCode::BadShape, "bottom_eigs needs k < n");
    check_epsilon(epsilon);
    EigenPairs out;
    out.sparsifier = refined_sparsify(g, epsilon / 10, seed, opt);
    const auto h = out.sparsifier.to_graph(g);
    const auto comps = connected_components(h);
    const auto kernel = detail::component_kernel(comps, n);
    const auto c = static_cast<std::size_t>(kernel.cols());

    auto push = [&](double value, const Eigen::VectorXd& v) {
        out.values.push_back(value);
        out.vectors.emplace_back(v.data(), v.data() + v.size());
    };
    for (std::size_t i = 0; i < std::min(k, c); ++i)
        push(0.0, kernel.col(static_cast<Eigen::Index>(i)));
    if (k <= c)
        return out;

    const auto wanted = k - c;
    const auto block = std::min(n - c, wanted + std::max<std::size_t>(wanted, 4));
    const auto rows = static_cast<Eigen::Index>(n);
    const auto cols = static_cast<Eigen::Index>(block);
    Rng rng(derive_seed(seed, {7}));
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            x(i, j) = uniform01(rng) - 0.5;
    x = detail::orthonormalize_against(x, kernel);

    const auto l = laplacian_matrix(h);
    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(cols);
    std::vector<double> rhs(n);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        Eigen::MatrixXd y(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            Eigen::VectorXd::Map(rhs.data(), rows) = x.col(j);
            const auto sol = solve_laplacian(h, rhs, 1e-12);
            y.col(j) = Eigen::VectorXd::Map(sol.x.data(), rows);
        }
        const Eigen::MatrixXd q = detail::orthonormalize_against(y, kernel);
        Eigen::MatrixXd t = q.transpose() * detail::apply(l, q);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t + t.transpose()));
        x = q * es.eigenvectors();
        const Eigen::VectorXd next = es.eigenvalues();
        out.iterations = it + 1;
        double change = 0;
        for (std::size_t i = 0; i < wanted; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            change = std::max(change, std::abs(next(ii) - ritz(ii)) / std::max(std::abs(next(ii)), 1e-300));
        }
        ritz = next;
        if (change < 1e-12)
            break;
    }
    for (std::size_t i = 0; i < wanted; ++i)
        push(std::max(ritz(static_cast<Eigen::Index>(i)), 0.0), x.col(static_cast<Eigen::Index>(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Minimum cut
// ---------------------------------------------------------------------------

struct MinCut {
    Cut cut;
    double value;
};

/// Exact global minimum cut by Stoer-Wagner on a dense weight matrix.
inline MinCut stoer_wagner(const WeightedGraph& g, std::size_t limit = default_dense_limit)
{
    const auto n = g.num_nodes();
    if (n < 2)
        throw Error(ErrorCode::BadShape, "minimum cut needs at least two nodes");
    check_dense(n, limit);
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) {
        w[e.u][e.v] += e.w;
        w[e.v][e.u] += e.w;
    }
    std::vector<std::vector<NodeId>> group(n);
    for (NodeId v = 0; v < n; ++v)
        group[v] = {v};
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    double best = infinity;
    std::vector<NodeId> best_side;
    std::vector<double> key(n);
    std::vector<bool> added(n);
    while (active.size() > 1) {
        for (auto v : active) {
            key[v] = 0;
            added[v] = false;
        }
        std::size_t prev = active.front(), last = active.front();
        for (std::size_t step = 0; step < active.size(); ++step) {
            std::size_t sel = n;
            for (auto v : active)
                if (!added[v] && (sel == n || key[v] > key[sel]))
                    sel = v;
            added[sel] = true;
            if (step + 1 == active.size()) {
                last = sel;
                break;
            }
            prev = sel;
            for (auto v : active)
                if (!added[v])
                    key[v] += w[sel][v];
        }
        if (key[last] < best) {
            best = key[last];
            best_side = group[last];
        }
        group[prev].insert(group[prev].end(), group[last].begin(), group[last].end());
        for (auto v : active) {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.erase(std::find(active.begin(), active.end(), last));
    }
    return {Cut(n, std::move(best_side)), best};
}

struct ApproxMinCut {
    Cut cut;
    double value;  // measured on the input graph
    Sparsifier sparsifier;
};

inline ApproxMinCut min_cut_approx(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                   const RefinedOptions& opt = {})
{
    if (!is_connected(g))
        throw Error(ErrorCode::Disconnected, "minimum cut approximation needs a connected graph");
    auto h = refined_sparsify(g, epsilon, seed, opt);
    auto found = stoer_wagner(h.to_graph(g));
    const double value = cut_value(g, found.cut);
    return {std::move(found.cut), value, std::move(h)};
}

} // namespace sparsekit

#endif // SPARSEKIT_SOLVER_HPP
