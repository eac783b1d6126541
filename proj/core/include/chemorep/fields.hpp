#pragma once

#include "chemorep/types.hpp"

#include <functional>

namespace chemorep {

/// Closed-form scalar field at a fixed time. `gradient` may be empty when only L2 data is needed.
struct ScalarField {
    std::function<double(Point2)> value;
    std::function<Vec2(Point2)> gradient;
};

/// Closed-form vector field at a fixed time. jacobian(i, j) = d value_i / d x_j; may be empty.
struct VectorField {
    std::function<Vec2(Point2)> value;
    std::function<Mat2(Point2)> jacobian;
};

[[nodiscard]] inline double divergence(const Mat2& jac) noexcept { return jac(0, 0) + jac(1, 1); }
/// Scalar curl d1 s2 - d2 s1.
[[nodiscard]] inline double rot(const Mat2& jac) noexcept { return jac(1, 0) - jac(0, 1); }

} // namespace chemorep
