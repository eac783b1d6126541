#pragma once

#include "chemorep/assembly.hpp"
#include "chemorep/fe_space.hpp"
#include "chemorep/fields.hpp"

namespace chemorep {

/// Spatial norms of one field.
///
/// `h1` is the standard (||e||_0^2 + ||grad e||_0^2)^{1/2}. `h1_equivalent` is the mean-value
/// variant (||grad e||_0^2 + (int e)^2)^{1/2} for scalars and (||div e||^2 + ||rot e||^2 +
/// ||e||^2)^{1/2} for vectors.
struct NormSet {
    double l2{0.0};
    double h1_semi{0.0};
    double h1{0.0};
    double h1_equivalent{0.0};
};

[[nodiscard]] NormSet norms(const FeFunction& fn, int quad_degree = kDefaultQuadratureDegree);

/// Norms of fn - exact. The exact gradient (jacobian) may be empty, then only l2 is filled.
[[nodiscard]] NormSet error_norms(const FeFunction& fn, const ScalarField& exact,
                                  int quad_degree = kDefaultQuadratureDegree);
[[nodiscard]] NormSet error_norms(const FeFunction& fn, const VectorField& exact,
                                  int quad_degree = kDefaultQuadratureDegree);

/// Norms of a - b for two functions on the same space.
[[nodiscard]] NormSet difference_norms(const FeFunction& a, const FeFunction& b,
                                       int quad_degree = kDefaultQuadratureDegree);

/// Integral of a scalar function over the domain.
[[nodiscard]] double integral(const FeFunction& fn, int quad_degree = kDefaultQuadratureDegree);

/// Integral of a closed-form function over the mesh.
[[nodiscard]] double integral(const Mesh& mesh, const std::function<double(Point2)>& f,
                              int quad_degree = kDefaultQuadratureDegree);

} // namespace chemorep
