#pragma once

#include "chemorep/mesh.hpp"
#include "chemorep/quadrature.hpp"
#include "chemorep/sparse.hpp"
#include "chemorep/types.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace chemorep {

/// Lagrange basis on the reference triangle. Local numbering: vertices 0..2, then (P2) the
/// midpoints of local edges (0,1), (1,2), (2,0).
class LagrangeElement {
public:
    explicit LagrangeElement(int degree);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int num_dofs() const noexcept { return degree_ == 1 ? 3 : 6; }
    [[nodiscard]] std::span<const Point2> nodes() const noexcept;

    [[nodiscard]] double value(int i, const Point2& xi) const;
    [[nodiscard]] Vec2 gradient(int i, const Point2& xi) const; ///< reference gradient

private:
    int degree_;
};

/// Basis values and reference gradients at every point of a quadrature rule.
struct Tabulation {
    int num_points{0};
    int num_dofs{0};
    std::vector<double> values;   ///< values[q * num_dofs + i]
    std::vector<Vec2> gradients;  ///< reference gradients, same layout
    std::vector<double> weights;
    std::vector<Point2> points;

    Tabulation(const LagrangeElement& element, const QuadratureRule& rule);
    [[nodiscard]] double value(int q, int i) const { return values[q * num_dofs + i]; }
    [[nodiscard]] const Vec2& gradient(int q, int i) const { return gradients[q * num_dofs + i]; }
};

/// A strongly imposed zero component of a vector field on the boundary (sigma . n = 0 on an
/// axis-aligned side).
struct ComponentConstraint {
    int dof{-1};        ///< global dof index (component offset included)
    int component{-1};  ///< 0 = x, 1 = y
    Vec2 normal;        ///< normal of the side that produced the constraint
};

/// Continuous Lagrange space of degree 1 or 2 with 1 (scalar) or 2 (vector) components.
///
/// Scalar dof numbering: P1 dof = vertex index; P2 adds V + edge index for edge midpoints.
/// Vector dofs are blocked: all x-components first, then all y-components, i.e. global dof
/// c * n_scalar_dofs() + s for component c of scalar dof s.
///
/// For vector spaces, sigma . n = 0 is imposed on axis-aligned boundary sides by constraining
/// the normal component; corner nodes get both components constrained. Boundary sides that are
/// not axis-aligned are rejected.
class FeSpace {
public:
    FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int components = 1);

    [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
    [[nodiscard]] const LagrangeElement& element() const noexcept { return element_; }
    [[nodiscard]] int degree() const noexcept { return element_.degree(); }
    [[nodiscard]] int components() const noexcept { return components_; }
    [[nodiscard]] bool is_vector() const noexcept { return components_ == 2; }

    [[nodiscard]] int n_scalar_dofs() const noexcept { return n_scalar_; }
    [[nodiscard]] int n_dofs() const noexcept { return n_scalar_ * components_; }
    [[nodiscard]] int dofs_per_element() const noexcept { return element_.num_dofs(); }

    /// Scalar dofs of triangle t in local order.
    [[nodiscard]] std::span<const int> element_dofs(int t) const;

    /// Physical location of each scalar dof.
    [[nodiscard]] const std::vector<Point2>& dof_points() const noexcept { return dof_points_; }

    [[nodiscard]] const std::vector<ComponentConstraint>& constraints() const noexcept { return constraints_; }
    /// Sorted global indices of constrained dofs (empty for scalar spaces).
    [[nodiscard]] const std::vector<int>& constrained_dofs() const noexcept { return constrained_; }

    /// Sets constrained coefficients to zero.
    void apply_constraints(std::span<double> coeffs) const;

    /// Pattern of the (test = this, trial = other) coupling over shared elements, component
    /// blocks included.
    [[nodiscard]] CsrMatrix sparsity_pattern(const FeSpace& trial) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    LagrangeElement element_;
    int components_;
    int n_scalar_{0};
    std::vector<int> element_dofs_;
    std::vector<Point2> dof_points_;
    std::vector<ComponentConstraint> constraints_;
    std::vector<int> constrained_;
};

struct FeFunction;

struct ScalarEval {
    double value{0.0};
    Vec2 gradient;
};

struct VectorEval {
    Vec2 value;
    Mat2 jacobian; ///< jacobian(i, j) = d value_i / d x_j
    [[nodiscard]] double divergence() const noexcept { return jacobian(0, 0) + jacobian(1, 1); }
    [[nodiscard]] double rot() const noexcept { return jacobian(1, 0) - jacobian(0, 1); }
};

/// Per-element quadrature data: physical points, JxW and physical basis gradients of one
/// space, recomputed by reinit(t).
class ElementValues {
public:
    ElementValues(const FeSpace& space, const QuadratureRule& rule);

    void reinit(int t);

    [[nodiscard]] int num_points() const noexcept { return tab_.num_points; }
    [[nodiscard]] int num_dofs() const noexcept { return tab_.num_dofs; }
    [[nodiscard]] int triangle() const noexcept { return t_; }
    [[nodiscard]] double jxw(int q) const { return jxw_[q]; }
    [[nodiscard]] const Point2& point(int q) const { return points_[q]; }
    [[nodiscard]] double phi(int q, int i) const { return tab_.value(q, i); }
    [[nodiscard]] const Vec2& grad(int q, int i) const { return grads_[q * tab_.num_dofs + i]; }
    [[nodiscard]] std::span<const int> dofs() const { return space_->element_dofs(t_); }

    /// Value and gradient at quadrature point q of a scalar function on the same space.
    [[nodiscard]] ScalarEval scalar(const FeFunction& fn, int q) const;
    [[nodiscard]] VectorEval vector(const FeFunction& fn, int q) const;

private:
    const FeSpace* space_;
    Tabulation tab_;
    int t_{-1};
    std::vector<double> jxw_;
    std::vector<Point2> points_;
    std::vector<Vec2> grads_;
};

/// Coefficient vector tagged with its space.
struct FeFunction {
    std::shared_ptr<const FeSpace> space;
    Vector coefficients;

    FeFunction() = default;
    explicit FeFunction(std::shared_ptr<const FeSpace> s);
    FeFunction(std::shared_ptr<const FeSpace> s, Vector c);

    [[nodiscard]] int size() const noexcept { return static_cast<int>(coefficients.size()); }
};

/// Physical basis data of one triangle at one reference point.
struct BasisEval {
    std::vector<double> values;
    std::vector<Vec2> gradients; ///< physical gradients (J^{-T} times reference gradients)
};

[[nodiscard]] BasisEval eval_basis(const FeSpace& space, int t, const Point2& xi);

/// Value and physical gradient of a scalar function at reference point xi of triangle t.
[[nodiscard]] ScalarEval evaluate(const FeFunction& fn, int t, const Point2& xi);
/// Value and jacobian of a vector function at reference point xi of triangle t.
[[nodiscard]] VectorEval evaluate_vector(const FeFunction& fn, int t, const Point2& xi);

/// Physical location of reference point xi in triangle t.
[[nodiscard]] Point2 map_to_physical(const Mesh& mesh, int t, const Point2& xi);

/// Nodal interpolants. Constraints are not applied.
[[nodiscard]] FeFunction interpolate(std::shared_ptr<const FeSpace> space, const std::function<double(Point2)>& f);
[[nodiscard]] FeFunction interpolate_vector(std::shared_ptr<const FeSpace> space,
                                            const std::function<Vec2(Point2)>& f);

} // namespace chemorep
