#pragma once

#include "chemorep/fe_space.hpp"
#include "chemorep/mesh.hpp"

#include <memory>

namespace chemorep {

/// The discrete spaces U_h (scalar), Sigma_h (vector) and V_h (scalar) on one mesh.
struct Spaces {
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<const FeSpace> u;
    std::shared_ptr<const FeSpace> sigma;
    std::shared_ptr<const FeSpace> v;
};

/// P1 / P1 / P2 unless told otherwise.
[[nodiscard]] Spaces make_spaces(std::shared_ptr<const Mesh> mesh, int u_degree = 1, int sigma_degree = 1,
                                 int v_degree = 2);

/// Fields at time t = n k.
struct State {
    int n{0};
    double t{0.0};
    FeFunction u;
    FeFunction sigma;
    FeFunction v;
};

} // namespace chemorep
