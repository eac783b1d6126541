#include "chemorep/fe_space.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace chemorep {

namespace {

constexpr std::array<Point2, 6> kP2Nodes{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}}};
constexpr std::array<Vec2, 3> kBaryGrad{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
constexpr std::array<std::array<int, 2>, 3> kEdgeVertices{{{0, 1}, {1, 2}, {2, 0}}};

std::array<double, 3> barycentric(const Point2& xi)
{
    return {1.0 - xi.x - xi.y, xi.x, xi.y};
}

} // namespace

LagrangeElement::LagrangeElement(int degree) : degree_(degree)
{
    if (degree != 1 && degree != 2)
        throw InvalidArgument(fmt::format("LagrangeElement: degree must be 1 or 2, got {}", degree));
}

std::span<const Point2> LagrangeElement::nodes() const noexcept
{
    return {kP2Nodes.data(), static_cast<std::size_t>(num_dofs())};
}

double LagrangeElement::value(int i, const Point2& xi) const
{
    const auto l = barycentric(xi);
    if (degree_ == 1) return l[i];
    if (i < 3) return l[i] * (2.0 * l[i] - 1.0);
    const auto& e = kEdgeVertices[i - 3];
    return 4.0 * l[e[0]] * l[e[1]];
}

Vec2 LagrangeElement::gradient(int i, const Point2& xi) const
{
    if (degree_ == 1) return kBaryGrad[i];
    const auto l = barycentric(xi);
    if (i < 3) return (4.0 * l[i] - 1.0) * kBaryGrad[i];
    const auto& e = kEdgeVertices[i - 3];
    return 4.0 * (l[e[1]] * kBaryGrad[e[0]] + l[e[0]] * kBaryGrad[e[1]]);
}

Tabulation::Tabulation(const LagrangeElement& element, const QuadratureRule& rule)
    : num_points(rule.size()), num_dofs(element.num_dofs()), weights(rule.weights), points(rule.points)
{
    values.resize(static_cast<std::size_t>(num_points * num_dofs));
    gradients.resize(values.size());
    for (int q = 0; q < num_points; ++q) {
        for (int i = 0; i < num_dofs; ++i) {
            values[q * num_dofs + i] = element.value(i, rule.points[q]);
            gradients[q * num_dofs + i] = element.gradient(i, rule.points[q]);
        }
    }
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int components)
    : mesh_(std::move(mesh)), element_(degree), components_(components)
{
    CHEMOREP_REQUIRE(mesh_ != nullptr, "FeSpace: null mesh");
    if (components != 1 && components != 2)
        throw InvalidArgument(fmt::format("FeSpace: components must be 1 or 2, got {}", components));

    const Mesh& m = *mesh_;
    const int nv = m.num_vertices();
    n_scalar_ = degree == 1 ? nv : nv + m.num_edges();
    const int nloc = element_.num_dofs();

    element_dofs_.resize(static_cast<std::size_t>(m.num_triangles()) * nloc);
    for (int t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangles()[t];
        for (int i = 0; i < 3; ++i) element_dofs_[t * nloc + i] = tri[i];
        if (degree == 2) {
            const auto& te = m.triangle_edges(t);
            for (int e = 0; e < 3; ++e) element_dofs_[t * nloc + 3 + e] = nv + te[e];
        }
    }

    dof_points_ = m.vertices();
    if (degree == 2) {
        for (const auto& e : m.edges())
            dof_points_.push_back(0.5 * (m.vertices()[e.vertices[0]] + m.vertices()[e.vertices[1]]));
    }

    if (components_ == 2) {
        for (const auto& be : m.boundary_edges()) {
            const Vec2 n = be.normal;
            int comp = -1;
            if (n.y == 0.0 && std::abs(n.x) == 1.0) comp = 0;
            else if (n.x == 0.0 && std::abs(n.y) == 1.0) comp = 1;
            else
                throw InvalidArgument(fmt::format(
                    "FeSpace: boundary edge {} has normal ({}, {}); sigma.n = 0 is only supported on axis-aligned sides",
                    be.edge, n.x, n.y));
            const Edge& edge = m.edges()[be.edge];
            std::vector<int> on_edge{edge.vertices[0], edge.vertices[1]};
            if (degree == 2) on_edge.push_back(nv + be.edge);
            for (int s : on_edge) {
                const int dof = comp * n_scalar_ + s;
                if (std::find(constrained_.begin(), constrained_.end(), dof) != constrained_.end()) continue;
                constrained_.push_back(dof);
                constraints_.push_back({dof, comp, n});
            }
        }
        std::sort(constraints_.begin(), constraints_.end(),
                  [](const ComponentConstraint& a, const ComponentConstraint& b) { return a.dof < b.dof; });
        std::sort(constrained_.begin(), constrained_.end());
    }
}

std::span<const int> FeSpace::element_dofs(int t) const
{
    const int nloc = element_.num_dofs();
    return {element_dofs_.data() + static_cast<std::size_t>(t) * nloc, static_cast<std::size_t>(nloc)};
}

void FeSpace::apply_constraints(std::span<double> coeffs) const
{
    CHEMOREP_REQUIRE(coeffs.size() == static_cast<std::size_t>(n_dofs()), "apply_constraints: size mismatch");
    for (int d : constrained_) coeffs[d] = 0.0;
}

CsrMatrix FeSpace::sparsity_pattern(const FeSpace& trial) const
{
    CHEMOREP_REQUIRE(mesh_.get() == trial.mesh_.get(), "sparsity_pattern: spaces live on different meshes");
    const int rows = n_dofs();
    const int cols = trial.n_dofs();
    std::vector<std::vector<int>> row_cols(static_cast<std::size_t>(rows));
    for (int t = 0; t < mesh_->num_triangles(); ++t) {
        const auto test = element_dofs(t);
        const auto trl = trial.element_dofs(t);
        for (int c = 0; c < components_; ++c)
            for (int i : test)
                for (int d = 0; d < trial.components_; ++d)
                    for (int j : trl) row_cols[c * n_scalar_ + i].push_back(d * trial.n_scalar_ + j);
    }
    std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<int> col_idx;
    for (int r = 0; r < rows; ++r) {
        auto& rc = row_cols[r];
        std::sort(rc.begin(), rc.end());
        rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
        col_idx.insert(col_idx.end(), rc.begin(), rc.end());
        offsets[r + 1] = static_cast<int>(col_idx.size());
        std::vector<int>().swap(rc);
    }
    std::vector<double> vals(col_idx.size(), 0.0);
    return CsrMatrix(rows, cols, std::move(offsets), std::move(col_idx), std::move(vals));
}

ElementValues::ElementValues(const FeSpace& space, const QuadratureRule& rule)
    : space_(&space), tab_(space.element(), rule)
{
    jxw_.resize(static_cast<std::size_t>(tab_.num_points));
    points_.resize(jxw_.size());
    grads_.resize(tab_.gradients.size());
}

void ElementValues::reinit(int t)
{
    t_ = t;
    const Mesh& mesh = space_->mesh();
    const auto g = mesh.element_geometry(t);
    const Point2 origin = mesh.vertices()[mesh.triangles()[t][0]];
    for (int q = 0; q < tab_.num_points; ++q) {
        jxw_[q] = tab_.weights[q] * g.det;
        points_[q] = origin + g.jacobian * tab_.points[q];
        for (int i = 0; i < tab_.num_dofs; ++i)
            grads_[q * tab_.num_dofs + i] = g.inverse_transpose * tab_.gradient(q, i);
    }
}

ScalarEval ElementValues::scalar(const FeFunction& fn, int q) const
{
    const auto d = dofs();
    ScalarEval r;
    for (int i = 0; i < tab_.num_dofs; ++i) {
        const double c = fn.coefficients[d[i]];
        r.value += c * phi(q, i);
        r.gradient += c * grad(q, i);
    }
    return r;
}

VectorEval ElementValues::vector(const FeFunction& fn, int q) const
{
    const auto d = dofs();
    const int ns = space_->n_scalar_dofs();
    VectorEval r;
    for (int i = 0; i < tab_.num_dofs; ++i) {
        const double cx = fn.coefficients[d[i]];
        const double cy = fn.coefficients[ns + d[i]];
        const Vec2& gi = grad(q, i);
        r.value += Vec2{cx * phi(q, i), cy * phi(q, i)};
        r.jacobian(0, 0) += cx * gi.x;
        r.jacobian(0, 1) += cx * gi.y;
        r.jacobian(1, 0) += cy * gi.x;
        r.jacobian(1, 1) += cy * gi.y;
    }
    return r;
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> s) : space(std::move(s))
{
    CHEMOREP_REQUIRE(space != nullptr, "FeFunction: null space");
    coefficients.assign(static_cast<std::size_t>(space->n_dofs()), 0.0);
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> s, Vector c) : space(std::move(s)), coefficients(std::move(c))
{
    CHEMOREP_REQUIRE(space != nullptr, "FeFunction: null space");
    if (coefficients.size() != static_cast<std::size_t>(space->n_dofs()))
        throw InvalidArgument(fmt::format("FeFunction: {} coefficients for a space with {} dofs", coefficients.size(),
                                          space->n_dofs()));
}

BasisEval eval_basis(const FeSpace& space, int t, const Point2& xi)
{
    const auto g = space.mesh().element_geometry(t);
    const auto& el = space.element();
    BasisEval out;
    out.values.resize(static_cast<std::size_t>(el.num_dofs()));
    out.gradients.resize(out.values.size());
    for (int i = 0; i < el.num_dofs(); ++i) {
        out.values[i] = el.value(i, xi);
        out.gradients[i] = g.inverse_transpose * el.gradient(i, xi);
    }
    return out;
}

ScalarEval evaluate(const FeFunction& fn, int t, const Point2& xi)
{
    CHEMOREP_REQUIRE(fn.space && !fn.space->is_vector(), "evaluate: scalar function expected");
    const auto b = eval_basis(*fn.space, t, xi);
    const auto dofs = fn.space->element_dofs(t);
    ScalarEval r;
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        const double c = fn.coefficients[dofs[i]];
        r.value += c * b.values[i];
        r.gradient += c * b.gradients[i];
    }
    return r;
}

VectorEval evaluate_vector(const FeFunction& fn, int t, const Point2& xi)
{
    CHEMOREP_REQUIRE(fn.space && fn.space->is_vector(), "evaluate_vector: vector function expected");
    const auto b = eval_basis(*fn.space, t, xi);
    const auto dofs = fn.space->element_dofs(t);
    const int ns = fn.space->n_scalar_dofs();
    VectorEval r;
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        const double cx = fn.coefficients[dofs[i]];
        const double cy = fn.coefficients[ns + dofs[i]];
        r.value += Vec2{cx * b.values[i], cy * b.values[i]};
        r.jacobian(0, 0) += cx * b.gradients[i].x;
        r.jacobian(0, 1) += cx * b.gradients[i].y;
        r.jacobian(1, 0) += cy * b.gradients[i].x;
        r.jacobian(1, 1) += cy * b.gradients[i].y;
    }
    return r;
}

Point2 map_to_physical(const Mesh& mesh, int t, const Point2& xi)
{
    const auto& tri = mesh.triangles().at(t);
    const auto& v = mesh.vertices();
    return v[tri[0]] + xi.x * (v[tri[1]] - v[tri[0]]) + xi.y * (v[tri[2]] - v[tri[0]]);
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const std::function<double(Point2)>& f)
{
    CHEMOREP_REQUIRE(space && !space->is_vector(), "interpolate: scalar space expected");
    FeFunction out(space);
    for (int s = 0; s < space->n_scalar_dofs(); ++s) out.coefficients[s] = f(space->dof_points()[s]);
    return out;
}

FeFunction interpolate_vector(std::shared_ptr<const FeSpace> space, const std::function<Vec2(Point2)>& f)
{
    CHEMOREP_REQUIRE(space && space->is_vector(), "interpolate_vector: vector space expected");
    FeFunction out(space);
    const int ns = space->n_scalar_dofs();
    for (int s = 0; s < ns; ++s) {
        const Vec2 v = f(space->dof_points()[s]);
        out.coefficients[s] = v.x;
        out.coefficients[ns + s] = v.y;
    }
    return out;
}

} // namespace chemorep
