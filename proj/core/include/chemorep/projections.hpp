#pragma once

#include "chemorep/assembly.hpp"
#include "chemorep/fields.hpp"
#include "chemorep/solvers.hpp"
#include "chemorep/state.hpp"

#include <memory>

namespace chemorep {

/// Elliptic (Ritz) projection onto one space. The operator is the A form on scalar spaces and
/// the B form on vector spaces, with the sigma . n = 0 constraints applied; it is factorized once
/// at construction.
class ProjectionProblem {
public:
    explicit ProjectionProblem(std::shared_ptr<const FeSpace> space, int quad_degree = kDefaultQuadratureDegree);

    [[nodiscard]] const std::shared_ptr<const FeSpace>& space() const noexcept { return space_; }
    /// Constrained operator matrix.
    [[nodiscard]] const CsrMatrix& matrix() const noexcept { return matrix_; }

    /// Right-hand side of the projection: the form applied to the exact field and each test
    /// function. Constrained entries are zero.
    [[nodiscard]] Vector rhs(const ScalarField& exact) const;
    [[nodiscard]] Vector rhs(const VectorField& exact) const;

    [[nodiscard]] Vector solve(std::span<const double> rhs) const;

private:
    std::shared_ptr<const FeSpace> space_;
    int quad_degree_;
    CsrMatrix matrix_;
    SpdFactorization factor_;
};

/// Requires the exact gradient (scalar) or jacobian (vector).
[[nodiscard]] FeFunction ritz_project(const ProjectionProblem& problem, const ScalarField& exact);
[[nodiscard]] FeFunction ritz_project(const ProjectionProblem& problem, const VectorField& exact);

struct InitialData {
    ScalarField u0;
    VectorField sigma0;
    ScalarField v0;
};

/// Projectors of the three spaces, sharing one factorization each.
struct Projectors {
    ProjectionProblem u;
    ProjectionProblem sigma;
    ProjectionProblem v;

    explicit Projectors(const Spaces& spaces);
};

/// (R_h^u u0, R_h^sigma sigma0, R_h^v v0) at n = 0, t = 0.
[[nodiscard]] State initialize_state(const Projectors& projectors, const InitialData& data);
[[nodiscard]] State initialize_state(const Spaces& spaces, const InitialData& data);

} // namespace chemorep
