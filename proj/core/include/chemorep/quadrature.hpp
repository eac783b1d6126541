#pragma once

#include "chemorep/types.hpp"

#include <vector>

namespace chemorep {

/// Symmetric rule on the reference triangle {(0,0), (1,0), (0,1)}; weights sum to 1/2.
struct QuadratureRule {
    int degree{0}; ///< polynomials up to this total degree integrate exactly
    std::vector<Point2> points;
    std::vector<double> weights;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Rule exact to at least `degree` (1 <= degree <= 6). Degree 3 returns the degree-4 rule,
/// which has only positive weights.
[[nodiscard]] const QuadratureRule& quadrature(int degree);

} // namespace chemorep
