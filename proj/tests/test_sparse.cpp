#include "chemorep/error.hpp"
#include "chemorep/solvers.hpp"
#include "chemorep/sparse.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace chemorep;

namespace {

CsrMatrix from_dense(const oracle::Dense& a)
{
    std::vector<Triplet> t;
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
        for (int j = 0; j < static_cast<int>(a[i].size()); ++j)
            if (a[i][j] != 0.0) t.push_back({i, j, a[i][j]});
    return coo_to_csr(static_cast<int>(a.size()), static_cast<int>(a[0].size()), std::move(t));
}

CsrMatrix tridiag(int n)
{
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i > 0) t.push_back({i, i - 1, -1.0});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    return coo_to_csr(n, n, t);
}

Vector random_vector(int n, std::mt19937& rng)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vector v(n);
    for (double& x : v) x = d(rng);
    return v;
}

} // namespace

TEST(CooToCsr, DuplicatesSummed)
{
    const CsrMatrix a = coo_to_csr(1, 1, {{0, 0, 1.0}, {0, 0, 2.0}});
    EXPECT_EQ(a.nnz(), 1);
    EXPECT_EQ(a.at(0, 0), 3.0);
}

TEST(CooToCsr, EmptyIsZero)
{
    const CsrMatrix a = coo_to_csr(2, 2, {});
    EXPECT_EQ(a.nnz(), 0);
    EXPECT_EQ(a.row_offsets().back(), 0);
    EXPECT_EQ(a.at(1, 1), 0.0);
}

TEST(CooToCsr, MatchesDenseTripletSum)
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> idx(0, 4);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::vector<Triplet> t;
    oracle::Dense dense(5, std::vector<double>(5, 0.0));
    for (int i = 0; i < 40; ++i) {
        Triplet tr{idx(rng), idx(rng), val(rng)};
        dense[tr.row][tr.col] += tr.value;
        t.push_back(tr);
    }
    const CsrMatrix a = coo_to_csr(5, 5, t);
    const auto d = a.to_dense();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) EXPECT_NEAR(d[i][j], dense[i][j], 1e-14);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = a.row_offsets()[i] + 1; k < a.row_offsets()[i + 1]; ++k)
            EXPECT_LT(a.col_indices()[k - 1], a.col_indices()[k]);
    EXPECT_EQ(a.nnz(), a.row_offsets().back());
}

TEST(CooToCsr, OrderIndependentBitwise)
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> idx(0, 3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<Triplet> t;
    for (int i = 0; i < 60; ++i) t.push_back({idx(rng), idx(rng), val(rng)});
    const CsrMatrix a = coo_to_csr(4, 4, t);
    std::shuffle(t.begin(), t.end(), rng);
    const CsrMatrix b = coo_to_csr(4, 4, t);
    EXPECT_EQ(a.values(), b.values());
    EXPECT_EQ(a.col_indices(), b.col_indices());
}

TEST(CooToCsr, OutOfRangeNamesTriplet)
{
    try {
        (void)coo_to_csr(2, 2, {{0, 0, 1.0}, {2, 1, 5.0}});
        FAIL();
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find('2'), std::string::npos) << msg;
    }
}

TEST(SolveSpd, IdentityReturnsRhs)
{
    const CsrMatrix id = coo_to_csr(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
    const Vector b{1.5, -2.0, 3.25};
    const Vector x = solve_spd(id, b);
    EXPECT_LE(oracle::max_abs_diff(x, b), 1e-14);
}

TEST(SolveSpd, PoissonTridiagonal)
{
    const CsrMatrix a = tridiag(4);
    const Vector b(4, 1.0);
    const Vector expected = oracle::dense_solve(a.to_dense(), b);
    EXPECT_LE(oracle::max_abs_diff(expected, {2, 3, 3, 2}), 1e-14);
    EXPECT_LE(oracle::max_abs_diff(solve_spd(a, b, 1e-12), expected), 1e-10);
}

TEST(SolveSpd, ZeroRhsReturnsZeroWithoutIterating)
{
    SolveStats stats;
    const Vector x = solve_spd(tridiag(5), Vector(5, 0.0), 1e-10, 100, &stats);
    EXPECT_EQ(stats.iterations, 0);
    EXPECT_EQ(oracle::max_abs(x), 0.0);
}

TEST(SolveSpd, NonConvergenceReportsResidual)
{
    try {
        (void)solve_spd(tridiag(50), Vector(50, 1.0), 1e-14, 2);
        FAIL();
    } catch (const LinearSolveError& e) {
        EXPECT_GT(e.residual(), 1e-14);
        EXPECT_EQ(e.iterations(), 2);
    }
}

TEST(SolveSpd, RandomSystemsMeetResidualContract)
{
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> size(2, 50);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = size(rng);
        const oracle::Dense dense = oracle::random_spd(n, rng);
        const CsrMatrix a = from_dense(dense);
        const Vector b = random_vector(n, rng);
        const Vector x = solve_spd(a, b, 1e-10);
        EXPECT_LE(relative_residual(a, x, b), 1e-10);
        const Vector ref = oracle::dense_solve(dense, b);
        EXPECT_LE(oracle::max_abs_diff(x, ref), 1e-8 * std::max(1.0, oracle::max_abs(ref)));
    }
}

TEST(SolveGeneral, IdentityReturnsRhs)
{
    const CsrMatrix id = coo_to_csr(2, 2, {{0, 0, 1}, {1, 1, 1}});
    EXPECT_LE(oracle::max_abs_diff(solve_general(id, Vector{4.0, -1.0}), {4.0, -1.0}), 1e-14);
}

TEST(SolveGeneral, UpperTriangular2x2)
{
    const CsrMatrix a = coo_to_csr(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 1, 1}});
    const Vector x = solve_general(a, Vector{3.0, 1.0}, 1e-12);
    EXPECT_LE(oracle::max_abs_diff(x, {1.0, 1.0}), 1e-12);
}

TEST(SolveGeneral, ConvectionDiffusionMatchesDenseOracle)
{
    for (double c : {1.0, 20.0, 80.0}) {
        const oracle::Dense dense = oracle::convection_diffusion(40, c);
        const CsrMatrix a = from_dense(dense);
        std::mt19937 rng(static_cast<unsigned>(c));
        const Vector b = random_vector(40, rng);
        const Vector ref = oracle::dense_solve(dense, b);
        const double scale = std::max(1.0, oracle::max_abs(ref));
        EXPECT_LE(oracle::max_abs_diff(solve_general(a, b, 1e-13), ref), 1e-8 * scale) << c;
        EXPECT_LE(oracle::max_abs_diff(solve_direct(a, b), ref), 1e-8 * scale) << c;
    }
}

TEST(SolveGeneral, ErrorWithoutFallback)
{
    // Jacobi-scaled BiCGStab cannot reach 1e-15 in one iteration on this system.
    const CsrMatrix a = from_dense(oracle::convection_diffusion(30, 50.0));
    EXPECT_THROW((void)solve_general(a, Vector(30, 1.0), 1e-15, 1, false), LinearSolveError);
    SolveStats stats;
    const Vector x = solve_general(a, Vector(30, 1.0), 1e-15, 1, true, &stats);
    EXPECT_TRUE(stats.used_direct);
    EXPECT_LE(relative_residual(a, x, Vector(30, 1.0)), 1e-12);
}

TEST(SparseLu, RefactorizeSamePattern)
{
    std::mt19937 rng(8);
    const oracle::Dense d1 = oracle::convection_diffusion(25, 3.0);
    const oracle::Dense d2 = oracle::convection_diffusion(25, 30.0);
    SparseLu lu(from_dense(d1));
    const Vector b = random_vector(25, rng);
    EXPECT_LE(oracle::max_abs_diff(lu.solve(b), oracle::dense_solve(d1, b)), 1e-10);
    lu.factorize(from_dense(d2));
    EXPECT_LE(oracle::max_abs_diff(lu.solve(b), oracle::dense_solve(d2, b)), 1e-10);
}

TEST(SparseLu, SingularRejected)
{
    const CsrMatrix a = coo_to_csr(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
    EXPECT_THROW(SparseLu lu(a), LinearSolveError);
}

TEST(SpdFactorization, MatchesDenseOracle)
{
    std::mt19937 rng(13);
    const oracle::Dense dense = oracle::random_spd(30, rng);
    const SpdFactorization f(from_dense(dense));
    EXPECT_EQ(f.size(), 30);
    const Vector b = random_vector(30, rng);
    EXPECT_LE(oracle::max_abs_diff(f.solve(b), oracle::dense_solve(dense, b)), 1e-10);
}

TEST(CsrMatrix, MultiplyTransposeAndAdd)
{
    std::mt19937 rng(2);
    const oracle::Dense d = oracle::convection_diffusion(6, 4.0);
    const CsrMatrix a = from_dense(d);
    const Vector x = random_vector(6, rng);
    const Vector y = a * x;
    for (int i = 0; i < 6; ++i) {
        double s = 0.0;
        for (int j = 0; j < 6; ++j) s += d[i][j] * x[j];
        EXPECT_NEAR(y[i], s, 1e-12);
    }
    const auto t = a.transpose().to_dense();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_EQ(t[i][j], d[j][i]);
    const auto s = add(a, a.transpose(), 0.5, 0.5);
    EXPECT_LE(s.max_asymmetry(), 1e-14);
    EXPECT_GT(a.max_asymmetry(), 0.0);
}

TEST(CsrMatrix, ConstrainSymmetric)
{
    CsrMatrix a = from_dense(oracle::convection_diffusion(5, 1.0));
    const std::vector<int> dofs{0, 3};
    constrain_symmetric(a, dofs);
    const auto d = a.to_dense();
    for (int c : dofs)
        for (int j = 0; j < 5; ++j) {
            EXPECT_EQ(d[c][j], c == j ? 1.0 : 0.0);
            EXPECT_EQ(d[j][c], c == j ? 1.0 : 0.0);
        }
}

TEST(CsrMatrix, BlockMatrixLayout)
{
    const CsrMatrix a = coo_to_csr(2, 2, {{0, 0, 1}, {1, 1, 2}});
    const CsrMatrix b = coo_to_csr(2, 3, {{0, 2, 3}});
    const CsrMatrix c = block_matrix({{{&a, &b}, {nullptr, nullptr}}}, {2, 3}, {2, 3});
    EXPECT_EQ(c.rows(), 5);
    EXPECT_EQ(c.cols(), 5);
    EXPECT_EQ(c.at(0, 0), 1.0);
    EXPECT_EQ(c.at(1, 1), 2.0);
    EXPECT_EQ(c.at(0, 4), 3.0);
    EXPECT_EQ(c.nnz(), 3);
}

TEST(CsrMatrix, MatrixMarketHeader)
{
    std::ostringstream os;
    write_matrix_market(coo_to_csr(2, 2, {{1, 0, 4.5}}), os);
    EXPECT_EQ(os.str().rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
    EXPECT_NE(os.str().find("2 1 4.5"), std::string::npos) << os.str();
}
