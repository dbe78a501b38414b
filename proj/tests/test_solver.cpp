#include <gtest/gtest.h>

#include <sparsekit/generators.hpp>
#include <sparsekit/resistance.hpp>
#include <sparsekit/solver.hpp>

#include "support/reference.hpp"

using namespace sparsekit;

namespace {

SparseMatrix from_dense(const Eigen::MatrixXd& a)
{
    std::vector<SparseMatrix::Triplet> t;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0)
                t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j)});
    return SparseMatrix::from_triplets(static_cast<std::size_t>(a.rows()), t);
}

// Minimum cut by enumerating every subset containing node 0.
double brute_force_min_cut(const WeightedGraph& g)
{
    const auto n = g.num_nodes();
    double best = infinity;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        std::vector<bool> in_s(n, false);
        for (std::size_t v = 1; v < n; ++v)
            in_s[v] = (mask >> (v - 1)) & 1;
        best = std::min(best, cut_value(g, Cut::from_indicator(in_s)));
    }
    return best;
}

std::vector<double> mean_free(std::vector<double> x)
{
    double s = 0;
    for (double v : x)
        s += v;
    for (auto& v : x)
        v -= s / static_cast<double>(x.size());
    return x;
}

} // namespace

// ----------------------------------------------------------------------------
// Laplacian solving

TEST(SolveLaplacian, ZeroRightHandSide)
{
    const auto r = solve_laplacian(gen::path(5), std::vector<double>(5, 0.0));
    EXPECT_EQ(r.x, std::vector<double>(5, 0.0));
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_TRUE(r.converged);
}

TEST(SolveLaplacian, TwoNodes)
{
    const double w = 2.5;
    const auto r = solve_laplacian(build_graph(2, {{0, 1, w}}), std::vector<double>{1, -1});
    EXPECT_NEAR(r.x[0], 1 / (2 * w), 1e-12);
    EXPECT_NEAR(r.x[1], -1 / (2 * w), 1e-12);
}

TEST(SolveLaplacian, MatchesDensePseudoinverse)
{
    Rng rng(5);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto g = gen::gnp_connected(200, 0.1, seed, {0.5, 2.0});
        const auto b = ref::balanced_vector(200, rng);
        const double tol = 1e-10;
        const auto r = solve_laplacian(g, b, tol);
        const Eigen::VectorXd expected = ref::pinv(ref::laplacian(g)) * ref::to_eigen(b);
        EXPECT_LE((ref::to_eigen(r.x) - expected).norm(), tol * 10 * expected.norm());
        EXPECT_TRUE(r.converged);
        EXPECT_FALSE(r.projected);
    }
}

TEST(SolveLaplacian, ReportedResidualIsRecomputed)
{
    Rng rng(1);
    const auto g = gen::gnp_connected(80, 0.1, 3);
    const auto b = ref::balanced_vector(80, rng);
    for (double tol : {1e-3, 1e-8, 1e-12}) {
        const auto r = solve_laplacian(g, b, tol);
        EXPECT_NEAR(r.residual, relative_residual(laplacian_matrix(g), r.x, b), 1e-12);
    }
}

TEST(SolveLaplacian, UnbalancedInputIsProjectedAndFlagged)
{
    const auto g = build_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 2.0}});
    const auto r = solve_laplacian(g, std::vector<double>{1, 0, 0, 1, 0});
    EXPECT_TRUE(r.projected);
    EXPECT_NEAR(r.x[0] + r.x[1] + r.x[2], 0.0, 1e-12);
    EXPECT_NEAR(r.x[3] + r.x[4], 0.0, 1e-12);
    const auto balanced = solve_laplacian(g, std::vector<double>{1, 0, -1, 1, -1});
    EXPECT_FALSE(balanced.projected);
}

TEST(SolveViaSparsifier, FallbackMatchesDirectSolve)
{
    Rng rng(2);
    const auto g = gen::gnp_connected(60, 0.2, 1);
    const auto b = ref::balanced_vector(60, rng);
    const auto via = solve_via_sparsifier(g, b, 0.1, 3);
    EXPECT_EQ(via.sparsifier.to_graph(g), g);
    EXPECT_EQ(via.result.x, solve_laplacian(g, b, 1e-12).x);
}

TEST(SolveViaSparsifier, LNormErrorBound)
{
    Rng rng(7);
    const double eps = 0.1;
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const auto g = gen::gnp(300, 0.3, 70 + seed);
        const auto b = ref::balanced_vector(300, rng);
        const auto via = solve_via_sparsifier(g, b, eps, seed);
        const Eigen::MatrixXd l = ref::laplacian(g);
        const Eigen::VectorXd x = ref::pinv(l) * ref::to_eigen(b);
        EXPECT_LE(ref::a_norm(l, ref::to_eigen(via.result.x) - x), 2 * eps * ref::a_norm(l, x));
    }
}

TEST(SolveViaSparsifier, ResistanceQuadraticForm)
{
    const auto g = gen::gnp_connected(100, 0.2, 9);
    std::vector<double> b(100, 0.0);
    b[4] = 1;
    b[50] = -1;
    const double eps = 0.25;
    const auto via = solve_via_sparsifier(g, b, eps, 1);
    const double r = exact_resistance(g, 4, 50);
    const double est = dot(b, via.result.x);
    EXPECT_GE(est, (1 - 2 * eps) * r);
    EXPECT_LE(est, (1 + 2 * eps) * r);
}

// ----------------------------------------------------------------------------
// SDD systems

TEST(SddSystem, RejectsNonDominant)
{
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 2, 1;
    try {
        SddSystem(from_dense(a), {1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSDD);
    }
    a << 2, 1, 0.5, 2;
    EXPECT_THROW(SddSystem(from_dense(a), {1, 1}), Error);
}

TEST(SddSystem, DecompositionReassembles)
{
    const auto a = gen::random_sdd(30, 0.3, 4);
    const auto parts = decompose(a);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(30, 30);
    for (std::size_t i = 0; i < 30; ++i)
        sum(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = parts.diagonal[i];
    for (const auto& t : parts.positive) {
        EXPECT_GT(t.value, 0);
        sum(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value;
    }
    for (const auto& t : parts.negative) {
        EXPECT_LT(t.value, 0);
        sum(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value;
    }
    EXPECT_TRUE(sum == ref::dense(a));
}

TEST(Gremban, PaperTwoByTwo)
{
    Eigen::MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    const auto reduced = gremban_reduce(SddSystem(from_dense(a), {1, 0}));
    Eigen::MatrixXd expected(4, 4);
    expected << 2, 0, 0, -1, 0, 2, -1, 0, 0, -1, 2, 0, -1, 0, 0, 2;
    EXPECT_TRUE(ref::dense(reduced.a) == expected);
    EXPECT_EQ(reduced.b, (std::vector<double>{1, 0, -1, 0}));
    EXPECT_TRUE(is_sddm(reduced.a));
}

TEST(Gremban, SddmInputDecouples)
{
    const auto a = gen::random_sdd(20, 0.3, 2, 0.0);
    std::vector<double> x(20);
    for (std::size_t i = 0; i < 20; ++i)
        x[i] = static_cast<double>(i) - 7.5;
    const auto reduced = gremban_reduce(SddSystem(a, x));
    const auto dense = ref::dense(reduced.a);
    EXPECT_TRUE(dense.topRightCorner(20, 20).isZero());
    EXPECT_TRUE(dense.bottomLeftCorner(20, 20).isZero());
    std::vector<double> z(40);
    for (std::size_t i = 0; i < 20; ++i) {
        z[i] = x[i];
        z[20 + i] = -x[i];
    }
    EXPECT_EQ(reduced.recover(z), x);
}

TEST(Gremban, DenseSolvesAgree)
{
    Rng rng(3);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto a = gen::random_sdd(40, 0.2, seed);
        std::vector<double> b(40);
        for (auto& v : b)
            v = uniform01(rng) - 0.5;
        const auto reduced = gremban_reduce(SddSystem(a, b));
        EXPECT_TRUE(is_sddm(reduced.a));
        EXPECT_TRUE(is_symmetric(reduced.a));
        const Eigen::VectorXd zhat = ref::dense(reduced.a).ldlt().solve(ref::to_eigen(reduced.b));
        const auto x = reduced.recover(std::vector<double>(zhat.data(), zhat.data() + zhat.size()));
        const Eigen::VectorXd direct = ref::dense(a).ldlt().solve(ref::to_eigen(b));
        EXPECT_LE((ref::to_eigen(x) - direct).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Gremban, RecoverIsLinear)
{
    const auto reduced = gremban_reduce(SddSystem(gen::random_sdd(5, 0.5, 1), std::vector<double>(5, 1.0)));
    const std::vector<double> u{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, v{0, -1, 2, 0.5, 3, 1, 1, 1, 1, 1};
    std::vector<double> sum(10);
    for (std::size_t i = 0; i < 10; ++i)
        sum[i] = 2 * u[i] + v[i];
    const auto ru = reduced.recover(u), rv = reduced.recover(v), rs = reduced.recover(sum);
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_DOUBLE_EQ(rs[i], 2 * ru[i] + rv[i]);
}

TEST(SddmSparsify, DiagonalMatrixUnchanged)
{
    Eigen::MatrixXd d = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();
    const auto out = sddm_sparsify(from_dense(d), 0.5, 1);
    EXPECT_TRUE(ref::dense(out.matrix) == d);
}

TEST(SddmSparsify, SparseInputFallsBack)
{
    const auto a = gen::random_sdd(30, 0.1, 6, 0.0);
    const auto out = sddm_sparsify(a, 0.5, 2);
    EXPECT_TRUE(ref::dense(out.matrix).isApprox(ref::dense(a), 1e-14));
}

TEST(SddmSparsify, RejectsPositiveOffDiagonal)
{
    const auto a = gen::random_sdd(10, 0.5, 1, 1.0);
    try {
        sddm_sparsify(a, 0.5, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSDDM);
    }
}

TEST(SddmSparsify, CompleteGraphPlusExcessSpectrum)
{
    Eigen::MatrixXd a = ref::laplacian(gen::complete(64)) + Eigen::MatrixXd::Identity(64, 64);
    const double eps = 0.25;
    const auto out = sddm_sparsify(from_dense(a), eps, 3);
    const Eigen::MatrixXd at = ref::dense(out.matrix);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(at, a);
    EXPECT_GE(es.eigenvalues().minCoeff(), 1 - 2 * eps);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1 + 2 * eps);
    EXPECT_TRUE(is_sddm(out.matrix));
}

TEST(SddmSparsify, PreservesDiagonalDominance)
{
    const auto a = gen::random_sdd(80, 0.6, 8, 0.0, 0.5);
    RefinedOptions opt;
    opt.rough.packing.c_pack = 1e-3;
    opt.big_c = 0.05;
    const auto out = sddm_sparsify(a, 1.0, 4, opt);
    EXPECT_LT(out.sparsifier.size(), sddm_graph(a).num_edges());
    EXPECT_TRUE(is_symmetric(out.matrix));
    std::size_t dominant_rows = 0;
    for (std::size_t i = 0; i < 80; ++i) {
        double diag = 0, off = 0;
        out.matrix.for_each_in_row(i, [&](std::size_t j, double v) {
            if (i == j)
                diag = v;
            else
                off += std::abs(v);
        });
        dominant_rows += diag >= off;
    }
    RecordProperty("dominant_rows", static_cast<int>(dominant_rows));
    EXPECT_GT(dominant_rows, 0u);
}

TEST(SddSolve, ZeroRightHandSide)
{
    const auto r = sdd_solve(SddSystem(gen::random_sdd(20, 0.3, 1), std::vector<double>(20, 0.0)), 0.5, 1);
    EXPECT_EQ(r.result.x, std::vector<double>(20, 0.0));
}

TEST(SddSolve, LaplacianCollapsesToSparsifierSolve)
{
    Rng rng(4);
    const auto g = gen::gnp_connected(40, 0.2, 2);
    const auto b = ref::balanced_vector(40, rng);
    const auto r = sdd_solve(SddSystem(laplacian_matrix(g), b), 0.2, 5);
    const auto via = solve_via_sparsifier(g, b, 0.2, 5);
    const auto x1 = mean_free(r.result.x), x2 = mean_free(via.result.x);
    for (std::size_t i = 0; i < 40; ++i)
        EXPECT_NEAR(x1[i], x2[i], 1e-8);
}

TEST(SddSolve, ANormErrorBound)
{
    Rng rng(6);
    const double eps = 0.1;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto a = gen::random_sdd(200, 0.1, seed);
        std::vector<double> b(200);
        for (auto& v : b)
            v = uniform01(rng) - 0.5;
        const auto r = sdd_solve(SddSystem(a, b), eps, seed);
        const Eigen::MatrixXd ad = ref::dense(a);
        const Eigen::VectorXd x = ad.ldlt().solve(ref::to_eigen(b));
        EXPECT_LE(ref::a_norm(ad, ref::to_eigen(r.result.x) - x), 4 * eps * ref::a_norm(ad, x));
        EXPECT_NEAR(r.result.residual, relative_residual(a, r.result.x, b), 1e-12);
    }
}

// ----------------------------------------------------------------------------
// Eigenpairs

TEST(BottomEigs, KernelVector)
{
    const auto g = gen::gnp_connected(30, 0.2, 1);
    const auto e = bottom_eigs(g, 1, 0.5, 2);
    ASSERT_EQ(e.values.size(), 1u);
    EXPECT_EQ(e.values[0], 0.0);
    for (double v : e.vectors[0])
        EXPECT_NEAR(std::abs(v), 1 / std::sqrt(30.0), 1e-12);
}

TEST(BottomEigs, CycleSecondEigenvalue)
{
    const auto g = gen::cycle(16);
    const double eps = 0.25;
    const auto e = bottom_eigs(g, 4, eps, 3);
    const double lambda2 = 2 - 2 * std::cos(2 * std::numbers::pi / 16);
    EXPECT_GE(e.values[1], (1 - eps) * lambda2);
    EXPECT_LE(e.values[1], (1 + eps) * lambda2);
}

TEST(BottomEigs, OrthonormalNondecreasingCertified)
{
    const double eps = 0.25;
    for (const auto& g : {gen::complete(32), gen::grid(6, 7), gen::gnp_connected(60, 0.2, 5)}) {
        const auto e = bottom_eigs(g, 4, eps, 1);
        ASSERT_EQ(e.values.size(), 4u);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref::laplacian(g));
        for (std::size_t i = 0; i < 4; ++i) {
            if (i > 0) {
                EXPECT_LE(e.values[i - 1], e.values[i]);
            }
            for (std::size_t j = 0; j < 4; ++j)
                EXPECT_NEAR(dot(e.vectors[i], e.vectors[j]), i == j ? 1.0 : 0.0, 1e-8);
            const double lambda = es.eigenvalues()(static_cast<Eigen::Index>(i));
            EXPECT_LE(laplacian_quadratic(g, e.vectors[i]), (1 + eps) * lambda + 1e-9);
        }
    }
}

TEST(BottomEigs, DisconnectedGraphHasSeveralZeros)
{
    const auto g = build_graph(6, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
    const auto e = bottom_eigs(g, 3, 0.5, 1);
    EXPECT_EQ(e.values[0], 0.0);
    EXPECT_EQ(e.values[1], 0.0);
    EXPECT_NEAR(e.values[2], 1.0, 1e-9);
}

TEST(BottomEigs, RejectsKAtLeastN)
{
    EXPECT_THROW(bottom_eigs(gen::path(4), 4, 0.5, 1), Error);
}

// ----------------------------------------------------------------------------
// Minimum cut

TEST(StoerWagner, MatchesBruteForce)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gen::gnp(11, 0.4, seed, {0.1, 3.0});
        const auto mc = stoer_wagner(g);
        EXPECT_NEAR(mc.value, brute_force_min_cut(g), 1e-12);
        EXPECT_NEAR(cut_value(g, mc.cut), mc.value, 1e-12);
    }
}

TEST(MinCutApprox, BridgedCliques)
{
    const auto g = gen::bridged_cliques(16);
    const auto mc = min_cut_approx(g, 0.1, 1);
    EXPECT_DOUBLE_EQ(mc.value, 1.0);
    EXPECT_EQ(mc.cut.members().size(), 16u);
}

TEST(MinCutApprox, NearExactOnRandomGraph)
{
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const auto g = gen::gnp(128, 0.3, seed, {1.0, 2.0});
        const auto mc = min_cut_approx(g, 0.1, seed);
        const double exact = stoer_wagner(g).value;
        EXPECT_GE(mc.value, exact - 1e-9);
        EXPECT_LE(mc.value, 1.25 * exact);
    }
}

TEST(MinCutApprox, ValueMeasuredOnInput)
{
    const auto g = gen::complete(30);
    RefinedOptions opt;
    opt.rough.packing.c_pack = 1e-3;
    opt.big_c = 0.1;
    const auto mc = min_cut_approx(g, 1.0, 2, opt);
    EXPECT_DOUBLE_EQ(mc.value, cut_value(g, mc.cut));
    EXPECT_GE(mc.value, stoer_wagner(g).value);
}

TEST(MinCutApprox, RejectsDisconnected)
{
    try {
        min_cut_approx(build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}), 0.5, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Disconnected);
    }
}
