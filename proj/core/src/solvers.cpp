#include "chemorep/solvers.hpp"

#include "chemorep/error.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include <cmath>

namespace chemorep {

namespace {

using EigenCsr = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenCsc to_eigen(const CsrMatrix& a)
{
    const Eigen::Map<const EigenCsr> view(a.rows(), a.cols(), a.nnz(), a.row_offsets().data(),
                                          a.col_indices().data(), a.values().data());
    EigenCsc out = view;
    out.makeCompressed();
    return out;
}

Vector inverse_diagonal(const CsrMatrix& a)
{
    Vector d = a.diagonal();
    for (double& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;
    return d;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace

double relative_residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b)
{
    Vector r = a * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const double nb = norm2(b);
    return nb > 0.0 ? norm2(r) / nb : norm2(r);
}

Vector solve_spd(const CsrMatrix& a, std::span<const double> b, double tol, int max_iter, SolveStats* stats)
{
    CHEMOREP_REQUIRE(a.rows() == a.cols(), "solve_spd: matrix not square");
    CHEMOREP_REQUIRE(b.size() == static_cast<std::size_t>(a.rows()), "solve_spd: rhs size mismatch");
    CHEMOREP_REQUIRE(tol > 0.0 && max_iter > 0, "solve_spd: tol and max_iter must be positive");
    const std::size_t n = b.size();
    Vector x(n, 0.0);
    const double nb = norm2(b);
    if (nb == 0.0) {
        if (stats) *stats = {0, 0.0, false};
        return x;
    }

    const Vector dinv = inverse_diagonal(a);
    Vector r(b.begin(), b.end());
    Vector z(n);
    Vector p(n);
    Vector q(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double res = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        a.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0))
            throw LinearSolveError(fmt::format("solve_spd: matrix not positive definite (p^T A p = {})", pq), res, it);
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        res = norm2(r) / nb;
        if (res <= tol) {
            // recurrence residual can drift; confirm with the true residual
            const double true_res = relative_residual(a, x, b);
            if (true_res <= tol) {
                if (stats) *stats = {it, true_res, false};
                return x;
            }
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res = relative_residual(a, x, b);
    throw LinearSolveError(
        fmt::format("solve_spd: no convergence in {} iterations (relative residual {:.3e} > {:.3e})", max_iter, res, tol),
        res, max_iter);
}

Vector solve_general(const CsrMatrix& a, std::span<const double> b, double tol, int max_iter, bool direct_fallback,
                     SolveStats* stats)
{
    CHEMOREP_REQUIRE(a.rows() == a.cols(), "solve_general: matrix not square");
    CHEMOREP_REQUIRE(b.size() == static_cast<std::size_t>(a.rows()), "solve_general: rhs size mismatch");
    CHEMOREP_REQUIRE(tol > 0.0 && max_iter > 0, "solve_general: tol and max_iter must be positive");
    const std::size_t n = b.size();
    Vector x(n, 0.0);
    const double nb = norm2(b);
    if (nb == 0.0) {
        if (stats) *stats = {0, 0.0, false};
        return x;
    }

    const Vector dinv = inverse_diagonal(a);
    Vector r(b.begin(), b.end());
    const Vector r_hat = r;
    Vector p(n, 0.0), v(n, 0.0), s(n), t(n), y(n), zv(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double res = 1.0;
    const char* failure = "no convergence";
    int it = 1;
    for (; it <= max_iter; ++it) {
        const double rho_new = dot(r_hat, r);
        if (rho_new == 0.0 || omega == 0.0) {
            failure = "breakdown";
            break;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        for (std::size_t i = 0; i < n; ++i) y[i] = dinv[i] * p[i];
        a.multiply(y, v);
        const double rv = dot(r_hat, v);
        if (rv == 0.0) {
            failure = "breakdown";
            break;
        }
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        axpy(alpha, y, x);
        if (norm2(s) / nb <= tol && relative_residual(a, x, b) <= tol) {
            res = relative_residual(a, x, b);
            if (stats) *stats = {it, res, false};
            return x;
        }
        for (std::size_t i = 0; i < n; ++i) zv[i] = dinv[i] * s[i];
        a.multiply(zv, t);
        const double tt = dot(t, t);
        if (tt == 0.0) {
            failure = "breakdown";
            break;
        }
        omega = dot(t, s) / tt;
        axpy(omega, zv, x);
        for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        res = norm2(r) / nb;
        if (res <= tol) {
            const double true_res = relative_residual(a, x, b);
            if (true_res <= tol) {
                if (stats) *stats = {it, true_res, false};
                return x;
            }
        }
        if (!std::isfinite(res)) {
            failure = "breakdown";
            break;
        }
    }
    res = relative_residual(a, x, b);
    if (direct_fallback) {
        Vector xd = solve_direct(a, b);
        if (stats) *stats = {std::min(it, max_iter), relative_residual(a, xd, b), true};
        return xd;
    }
    throw LinearSolveError(fmt::format("solve_general: BiCGStab {} after {} iterations (relative residual {:.3e})",
                                       failure, std::min(it, max_iter), res),
                           res, std::min(it, max_iter));
}

struct SparseLu::Impl {
    Eigen::SparseLU<EigenCsc, Eigen::COLAMDOrdering<int>> lu;
    std::vector<int> pattern_offsets;
    std::vector<int> pattern_cols;
    bool analyzed{false};
    bool factorized{false};
};

SparseLu::SparseLu() : impl_(std::make_unique<Impl>()) {}
SparseLu::SparseLu(const CsrMatrix& a) : SparseLu() { factorize(a); }
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::factorize(const CsrMatrix& a)
{
    CHEMOREP_REQUIRE(a.rows() == a.cols(), "SparseLu: matrix not square");
    const EigenCsc m = to_eigen(a);
    const bool same_pattern =
        impl_->analyzed && impl_->pattern_offsets == a.row_offsets() && impl_->pattern_cols == a.col_indices();
    if (!same_pattern) {
        impl_->lu.analyzePattern(m);
        impl_->pattern_offsets = a.row_offsets();
        impl_->pattern_cols = a.col_indices();
        impl_->analyzed = true;
    }
    impl_->lu.factorize(m);
    impl_->factorized = impl_->lu.info() == Eigen::Success;
    if (!impl_->factorized)
        throw LinearSolveError(fmt::format("sparse LU factorization failed: {}", impl_->lu.lastErrorMessage()),
                               std::nan(""), 0);
}

Vector SparseLu::solve(std::span<const double> b) const
{
    CHEMOREP_REQUIRE(impl_->factorized, "SparseLu::solve called before a successful factorize");
    CHEMOREP_REQUIRE(b.size() == static_cast<std::size_t>(impl_->lu.rows()), "SparseLu::solve: rhs size mismatch");
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw LinearSolveError("sparse LU solve failed", std::nan(""), 0);
    return Vector(x.data(), x.data() + x.size());
}

struct SpdFactorization::Impl {
    Eigen::SimplicialLDLT<EigenCsc> ldlt;
    int n{0};
};

SpdFactorization::SpdFactorization() : impl_(std::make_unique<Impl>()) {}
SpdFactorization::SpdFactorization(const CsrMatrix& a) : SpdFactorization() { factorize(a); }
SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept = default;

void SpdFactorization::factorize(const CsrMatrix& a)
{
    CHEMOREP_REQUIRE(a.rows() == a.cols(), "SpdFactorization: matrix not square");
    impl_->ldlt.compute(to_eigen(a));
    if (impl_->ldlt.info() != Eigen::Success)
        throw LinearSolveError("sparse LDL^T factorization failed (matrix not SPD?)", std::nan(""), 0);
    impl_->n = a.rows();
}

Vector SpdFactorization::solve(std::span<const double> b) const
{
    CHEMOREP_REQUIRE(impl_->n > 0, "SpdFactorization::solve called before factorize");
    CHEMOREP_REQUIRE(b.size() == static_cast<std::size_t>(impl_->n), "SpdFactorization::solve: rhs size mismatch");
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd x = impl_->ldlt.solve(rhs);
    return Vector(x.data(), x.data() + x.size());
}

int SpdFactorization::size() const noexcept
{
    return impl_->n;
}

Vector solve_direct(const CsrMatrix& a, std::span<const double> b)
{
    SparseLu lu(a);
    return lu.solve(b);
}

} // namespace chemorep
