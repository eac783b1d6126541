#pragma once

#include "chemorep/sparse.hpp"

#include <memory>
#include <span>

namespace chemorep {

struct SolveStats {
    int iterations{0};
    double relative_residual{0.0};
    bool used_direct{false};
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Converged when
/// ||b - A x||_2 / ||b||_2 <= tol; b = 0 returns 0 without iterating.
/// Throws LinearSolveError (with the achieved residual) after max_iter iterations.
[[nodiscard]] Vector solve_spd(const CsrMatrix& a, std::span<const double> b, double tol = 1e-10,
                               int max_iter = 10000, SolveStats* stats = nullptr);

/// Jacobi-preconditioned BiCGStab under the same residual contract as solve_spd.
/// On breakdown or non-convergence the system is solved by sparse LU when
/// `direct_fallback` is set, otherwise LinearSolveError is thrown.
[[nodiscard]] Vector solve_general(const CsrMatrix& a, std::span<const double> b, double tol = 1e-10,
                                   int max_iter = 10000, bool direct_fallback = true, SolveStats* stats = nullptr);

/// Sparse LU with partial pivoting. The symbolic analysis is kept and reused by
/// refactorize() while the sparsity pattern stays the same.
class SparseLu {
public:
    SparseLu();
    explicit SparseLu(const CsrMatrix& a);
    ~SparseLu();
    SparseLu(SparseLu&&) noexcept;
    SparseLu& operator=(SparseLu&&) noexcept;

    /// Throws LinearSolveError if the matrix is numerically singular.
    void factorize(const CsrMatrix& a);
    [[nodiscard]] Vector solve(std::span<const double> b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Sparse LDL^T of an SPD matrix, for operators that are factorized once and solved many times.
class SpdFactorization {
public:
    SpdFactorization();
    explicit SpdFactorization(const CsrMatrix& a);
    ~SpdFactorization();
    SpdFactorization(SpdFactorization&&) noexcept;
    SpdFactorization& operator=(SpdFactorization&&) noexcept;

    void factorize(const CsrMatrix& a);
    [[nodiscard]] Vector solve(std::span<const double> b) const;
    [[nodiscard]] int size() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot sparse LU solve.
[[nodiscard]] Vector solve_direct(const CsrMatrix& a, std::span<const double> b);

/// ||b - A x||_2 / ||b||_2 (or ||A x||_2 when b = 0).
[[nodiscard]] double relative_residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b);

} // namespace chemorep
