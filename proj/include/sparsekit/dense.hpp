#ifndef SPARSEKIT_DENSE_HPP
#define SPARSEKIT_DENSE_HPP

#include <Eigen/Dense>

#include "error.hpp"
#include "graph.hpp"

namespace sparsekit::dense {

/// Moore-Penrose pseudoinverse of a symmetric matrix; eigenvalues below
/// rel_tol * max|λ| count as zero.
inline Eigen::MatrixXd symmetric_pseudoinverse(const Eigen::MatrixXd& m, double rel_tol = 1e-10)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& lambda = es.eigenvalues();
    const double cutoff = rel_tol * std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        inv(i) = std::abs(lambda(i)) > cutoff ? 1.0 / lambda(i) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::MatrixXd laplacian_pseudoinverse(const WeightedGraph& g, std::size_t limit = default_dense_limit)
{
    return symmetric_pseudoinverse(dense_laplacian(g, limit));
}

/// Eigenvalues of the pencil (b, a) on the range of a: the spectrum of
/// a^{+/2} b a^{+/2} restricted to range(a). a must be positive semidefinite.
inline Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double rel_tol = 1e-10)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto& lambda = es.eigenvalues();
    const double cutoff = rel_tol * std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index first = 0;
    while (first < lambda.size() && lambda(first) <= cutoff)
        ++first;
    const Eigen::Index rank = lambda.size() - first;
    if (rank == 0)
        return Eigen::VectorXd();
    Eigen::MatrixXd basis = es.eigenvectors().rightCols(rank);
    Eigen::VectorXd scale = lambda.tail(rank).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd w = basis * scale.asDiagonal();
    Eigen::MatrixXd m = w.transpose() * b * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return inner.eigenvalues();
}

} // namespace sparsekit::dense

#endif // SPARSEKIT_DENSE_HPP
