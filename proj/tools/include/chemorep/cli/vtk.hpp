#pragma once

#include "chemorep/state.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace chemorep::cli {

/// Legacy ASCII unstructured grid: mesh vertices, triangle cells, point data `u`, `v` and vector
/// `sigma`. Only vertex dofs are written, so P2 edge values are dropped.
void write_vtk(const State& state, const std::filesystem::path& path);

/// Minimal reader for files produced by write_vtk.
struct VtkData {
    std::vector<Point2> points;
    std::vector<std::array<int, 3>> cells;
    std::map<std::string, std::vector<double>> scalars;
    std::map<std::string, std::vector<Vec2>> vectors;
};

[[nodiscard]] VtkData read_vtk(const std::filesystem::path& path);

} // namespace chemorep::cli
