#pragma once

#include "chemorep/fe_space.hpp"
#include "chemorep/fields.hpp"
#include "chemorep/sparse.hpp"

#include <functional>

namespace chemorep {

/// Global quadrature degree of every form and norm.
inline constexpr int kDefaultQuadratureDegree = 6;

/// Bilinear forms. Test functions are written with a bar.
enum class FormTag {
    Mass,        ///< (u, u_bar); componentwise on vector spaces
    Stiffness,   ///< (grad u, grad u_bar); componentwise on vector spaces
    AForm,       ///< (grad u, grad u_bar) + (u, u_bar)
    BForm,       ///< (div s, div s_bar) + (rot s, rot s_bar) + (s, s_bar), vector spaces only
    ConvUSigma,  ///< (w s, grad u_bar): vector trial s, scalar test, frozen scalar w
    ConvGradU,   ///< 2 (w grad u, s_bar): scalar trial u, vector test, frozen scalar w
    TransportFrozenSigma, ///< (u s, grad u_bar): scalar trial u, scalar test, frozen vector s
    ProductFrozenGradW,   ///< 2 (u grad w, s_bar): scalar trial u, vector test, frozen scalar w
};

struct FormCoefficients {
    const FeFunction* w{nullptr};     ///< frozen scalar coefficient
    const FeFunction* sigma{nullptr}; ///< frozen vector coefficient
};

/// Assembles a bilinear form on the (test, trial) pair. With `constrain`, the sigma . n = 0
/// constraints of vector spaces are applied: square vector-vector matrices get identity rows and
/// zero columns, rectangular couplings get zero rows (vector test) or zero columns (vector trial).
[[nodiscard]] CsrMatrix assemble_bilinear(FormTag form, const FeSpace& test, const FeSpace& trial,
                                          FormCoefficients coeffs = {}, bool constrain = true,
                                          int quad_degree = kDefaultQuadratureDegree);

/// Unconstrained assembly into an existing matrix whose pattern is test.sparsity_pattern(trial).
/// Previous values are overwritten.
void assemble_bilinear_into(CsrMatrix& a, FormTag form, const FeSpace& test, const FeSpace& trial,
                            FormCoefficients coeffs = {}, int quad_degree = kDefaultQuadratureDegree);

enum class RhsTag {
    L2Source, ///< (f, v_bar) for a closed-form f
    USquared, ///< (u_h^2, v_bar) with u_h evaluated at quadrature points and squared pointwise
};

struct LinearFormData {
    std::function<double(Point2)> scalar_source;
    std::function<Vec2(Point2)> vector_source;
    const FeFunction* u{nullptr};
};

/// Load vectors. Constrained entries of vector test spaces are left unconstrained; callers that
/// impose sigma . n = 0 zero them.
[[nodiscard]] Vector assemble_linear(RhsTag kind, const FeSpace& test, const LinearFormData& data,
                                     int quad_degree = kDefaultQuadratureDegree);

[[nodiscard]] Vector assemble_source(const FeSpace& test, const std::function<double(Point2)>& f,
                                     int quad_degree = kDefaultQuadratureDegree);
[[nodiscard]] Vector assemble_vector_source(const FeSpace& test, const std::function<Vec2(Point2)>& g,
                                            int quad_degree = kDefaultQuadratureDegree);
[[nodiscard]] Vector assemble_u_squared(const FeSpace& test, const FeFunction& u,
                                        int quad_degree = kDefaultQuadratureDegree);

} // namespace chemorep
