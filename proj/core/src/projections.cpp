#include "chemorep/projections.hpp"

#include "chemorep/error.hpp"

namespace chemorep {

Spaces make_spaces(std::shared_ptr<const Mesh> mesh, int u_degree, int sigma_degree, int v_degree)
{
    CHEMOREP_REQUIRE(mesh != nullptr, "make_spaces: null mesh");
    Spaces s;
    s.mesh = mesh;
    s.u = std::make_shared<const FeSpace>(mesh, u_degree, 1);
    s.sigma = std::make_shared<const FeSpace>(mesh, sigma_degree, 2);
    s.v = std::make_shared<const FeSpace>(mesh, v_degree, 1);
    return s;
}

ProjectionProblem::ProjectionProblem(std::shared_ptr<const FeSpace> space, int quad_degree)
    : space_(std::move(space)), quad_degree_(quad_degree)
{
    CHEMOREP_REQUIRE(space_ != nullptr, "ProjectionProblem: null space");
    const FormTag form = space_->is_vector() ? FormTag::BForm : FormTag::AForm;
    matrix_ = assemble_bilinear(form, *space_, *space_, {}, true, quad_degree_);
    factor_.factorize(matrix_);
}

Vector ProjectionProblem::rhs(const ScalarField& exact) const
{
    CHEMOREP_REQUIRE(!space_->is_vector(), "ProjectionProblem: scalar field given for a vector space");
    CHEMOREP_REQUIRE(exact.value && exact.gradient, "ProjectionProblem: exact value and gradient required");
    ElementValues ev(*space_, quadrature(quad_degree_));
    Vector b(static_cast<std::size_t>(space_->n_dofs()), 0.0);
    for (int t = 0; t < space_->mesh().num_triangles(); ++t) {
        ev.reinit(t);
        const auto dofs = ev.dofs();
        for (int q = 0; q < ev.num_points(); ++q) {
            const double jxw = ev.jxw(q);
            const double u = exact.value(ev.point(q)) * jxw;
            const Vec2 g = exact.gradient(ev.point(q)) * jxw;
            for (int i = 0; i < ev.num_dofs(); ++i) b[dofs[i]] += dot(g, ev.grad(q, i)) + u * ev.phi(q, i);
        }
    }
    return b;
}

Vector ProjectionProblem::rhs(const VectorField& exact) const
{
    CHEMOREP_REQUIRE(space_->is_vector(), "ProjectionProblem: vector field given for a scalar space");
    CHEMOREP_REQUIRE(exact.value && exact.jacobian, "ProjectionProblem: exact value and jacobian required");
    ElementValues ev(*space_, quadrature(quad_degree_));
    const int ns = space_->n_scalar_dofs();
    Vector b(static_cast<std::size_t>(space_->n_dofs()), 0.0);
    for (int t = 0; t < space_->mesh().num_triangles(); ++t) {
        ev.reinit(t);
        const auto dofs = ev.dofs();
        for (int q = 0; q < ev.num_points(); ++q) {
            const double jxw = ev.jxw(q);
            const Vec2 s = exact.value(ev.point(q)) * jxw;
            const Mat2 j = exact.jacobian(ev.point(q));
            const double d = divergence(j) * jxw;
            const double r = rot(j) * jxw;
            for (int i = 0; i < ev.num_dofs(); ++i) {
                const Vec2& g = ev.grad(q, i);
                const double p = ev.phi(q, i);
                b[dofs[i]] += d * g.x - r * g.y + s.x * p;
                b[ns + dofs[i]] += d * g.y + r * g.x + s.y * p;
            }
        }
    }
    space_->apply_constraints(b);
    return b;
}

Vector ProjectionProblem::solve(std::span<const double> rhs) const
{
    CHEMOREP_REQUIRE(static_cast<int>(rhs.size()) == space_->n_dofs(), "ProjectionProblem: rhs size mismatch");
    return factor_.solve(rhs);
}

FeFunction ritz_project(const ProjectionProblem& problem, const ScalarField& exact)
{
    return FeFunction(problem.space(), problem.solve(problem.rhs(exact)));
}

FeFunction ritz_project(const ProjectionProblem& problem, const VectorField& exact)
{
    FeFunction r(problem.space(), problem.solve(problem.rhs(exact)));
    problem.space()->apply_constraints(r.coefficients);
    return r;
}

Projectors::Projectors(const Spaces& spaces) : u(spaces.u), sigma(spaces.sigma), v(spaces.v) {}

State initialize_state(const Projectors& projectors, const InitialData& data)
{
    State s;
    s.u = ritz_project(projectors.u, data.u0);
    s.sigma = ritz_project(projectors.sigma, data.sigma0);
    s.v = ritz_project(projectors.v, data.v0);
    return s;
}

State initialize_state(const Spaces& spaces, const InitialData& data)
{
    return initialize_state(Projectors(spaces), data);
}

} // namespace chemorep
