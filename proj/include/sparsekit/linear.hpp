#ifndef SPARSEKIT_LINEAR_HPP
#define SPARSEKIT_LINEAR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace sparsekit {

/// Square sparse matrix in compressed-row form with sorted, merged columns.
class SparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        double value;
    };

    SparseMatrix() = default;

    static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries)
    {
        std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return std::tie(a.row, a.col, a.value) < std::tie(b.row, b.col, b.value);
        });
        SparseMatrix a;
        a.n_ = n;
        a.row_ptr_.assign(n + 1, 0);
        std::size_t last_row = 0;
        for (const auto& t : entries) {
            if (t.row >= n || t.col >= n)
                throw Error(ErrorCode::BadShape, "matrix entry out of range");
            if (!a.col_.empty() && last_row == t.row && a.col_.back() == t.col) {
                a.val_.back() += t.value;
                continue;
            }
            a.col_.push_back(t.col);
            a.val_.push_back(t.value);
            last_row = t.row;
            ++a.row_ptr_[t.row + 1];
        }
        std::partial_sum(a.row_ptr_.begin(), a.row_ptr_.end(), a.row_ptr_.begin());
        return a;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t nonzeros() const noexcept { return val_.size(); }

    template <class F>
    void for_each_in_row(std::size_t i, F&& f) const
    {
        for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            f(col_[p], val_[p]);
    }

    double at(std::size_t i, std::size_t j) const
    {
        const auto first = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
        const auto last = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
        const auto it = std::lower_bound(first, last, j);
        return it != last && *it == j ? val_[static_cast<std::size_t>(it - col_.begin())] : 0.0;
    }

    void multiply(std::span<const double> x, std::span<double> y) const
    {
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0;
            for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
                s += val_[p] * x[col_[p]];
            y[i] = s;
        }
    }

    std::vector<double> multiply(std::span<const double> x) const
    {
        std::vector<double> y(n_);
        multiply(x, y);
        return y;
    }

    std::vector<double> diagonal() const
    {
        std::vector<double> d(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            d[i] = at(i, i);
        return d;
    }

    std::vector<Triplet> triplets() const
    {
        std::vector<Triplet> out;
        out.reserve(nonzeros());
        for (std::size_t i = 0; i < n_; ++i)
            for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
                out.push_back({i, col_[p], val_[p]});
        return out;
    }

    Eigen::MatrixXd to_dense(std::size_t limit = default_dense_limit) const
    {
        check_dense(n_, limit);
        const auto n = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n_; ++i)
            for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_[p])) = val_[p];
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_;
    std::vector<double> val_;
};

inline SparseMatrix laplacian_matrix(const WeightedGraph& g)
{
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(4 * g.num_edges() + g.num_nodes());
    for (std::size_t v = 0; v < g.num_nodes(); ++v)
        t.push_back({v, v, 0.0});
    for (const auto& e : g.edges()) {
        if (e.w == 0)
            continue;
        t.push_back({e.u, e.v, -e.w});
        t.push_back({e.v, e.u, -e.w});
        t.push_back({e.u, e.u, e.w});
        t.push_back({e.v, e.v, e.w});
    }
    return SparseMatrix::from_triplets(g.num_nodes(), std::move(t));
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

struct SolveResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    double residual = 0;     // ||A x - b|| / ||b||, recomputed from the returned x
    bool converged = true;   // false when the iteration cap was hit first
    bool projected = false;  // the right-hand side had to be balanced first
};

inline double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b)
{
    const auto ax = a.multiply(x);
    double r2 = 0;
    for (std::size_t i = 0; i < ax.size(); ++i)
        r2 += (ax[i] - b[i]) * (ax[i] - b[i]);
    const double nb = norm2(b);
    return nb > 0 ? std::sqrt(r2) / nb : std::sqrt(r2);
}

/// Jacobi-preconditioned conjugate gradient from x = 0. Also valid for
/// singular positive semidefinite A when b lies in its range. Rows with a
/// zero diagonal are left unpreconditioned.
inline SolveResult conjugate_gradient(const SparseMatrix& a, std::span<const double> b, double tol,
                                      std::size_t max_iterations)
{
    const auto n = a.size();
    if (b.size() != n)
        throw Error(ErrorCode::LengthMismatch, "right-hand side length");
    SolveResult result;
    result.x.assign(n, 0.0);
    const double norm_b = norm2(b);
    if (norm_b == 0)
        return result;

    auto inv_diag = a.diagonal();
    for (auto& d : inv_diag)
        d = d > 0 ? 1.0 / d : 1.0;

    std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i)
        z[i] = inv_diag[i] * r[i];
    p = z;
    double rho = dot(r, z);
    double res = 1.0;
    std::size_t it = 0;
    while (it < max_iterations) {
        a.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0))
            break;
        const double alpha = rho / pq;
        for (std::size_t i = 0; i < n; ++i) {
            result.x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        ++it;
        res = norm2(r) / norm_b;
        if (res <= tol)
            break;
        for (std::size_t i = 0; i < n; ++i)
            z[i] = inv_diag[i] * r[i];
        const double rho_next = dot(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = z[i] + beta * p[i];
    }
    result.iterations = it;
    result.residual = relative_residual(a, result.x, b);
    result.converged = result.residual <= tol;
    return result;
}

/// Removes the per-component mean of x. Returns the largest absolute
/// component sum that was removed.
inline double project_mean_zero(std::span<double> x, const Components& comps)
{
    std::vector<double> sum(comps.count, 0.0);
    std::vector<std::size_t> count(comps.count, 0);
    for (std::size_t v = 0; v < x.size(); ++v) {
        sum[comps.label[v]] += x[v];
        ++count[comps.label[v]];
    }
    double worst = 0;
    for (std::uint32_t c = 0; c < comps.count; ++c)
        worst = std::max(worst, std::abs(sum[c]));
    for (std::size_t v = 0; v < x.size(); ++v)
        x[v] -= sum[comps.label[v]] / static_cast<double>(count[comps.label[v]]);
    return worst;
}

inline bool is_balanced(double removed_sum, std::span<const double> b)
{
    double l1 = 0;
    for (double v : b)
        l1 += std::abs(v);
    return removed_sum <= 1e-10 * std::max(l1, 1e-300);
}

/// Solves L_G x = b in the pseudoinverse sense: b is projected onto the
/// range of L_G (flagged if that changed it) and x has zero mean on every
/// component. Conjugate gradient with Jacobi preconditioning, capped at 20n
/// iterations.
inline SolveResult solve_laplacian(const WeightedGraph& g, std::span<const double> b, double tol = 1e-10)
{
    if (b.size() != g.num_nodes())
        throw Error(ErrorCode::LengthMismatch, "right-hand side length");
    const auto comps = connected_components(g);
    std::vector<double> rhs(b.begin(), b.end());
    const double removed = project_mean_zero(rhs, comps);
    const auto l = laplacian_matrix(g);
    auto result = conjugate_gradient(l, rhs, tol, std::max<std::size_t>(20 * g.num_nodes(), 1));
    result.projected = !is_balanced(removed, b);
    project_mean_zero(result.x, comps);
    result.residual = relative_residual(l, result.x, rhs);
    result.converged = result.residual <= tol;
    return result;
}

} // namespace sparsekit

#endif // SPARSEKIT_LINEAR_HPP
