#pragma once

#include "chemorep/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace chemorep {

/// Affine map data of one triangle: x = v0 + jacobian * xi, xi on the reference triangle
/// {(0,0), (1,0), (0,1)}.
struct ElementGeometry {
    Mat2 jacobian;
    double det{0.0}; ///< 2 * area, positive for counterclockwise triangles
    Mat2 inverse_transpose;
};

struct Edge {
    std::array<int, 2> vertices{}; ///< sorted, vertices[0] < vertices[1]
    std::array<int, 2> triangles{-1, -1}; ///< triangles[1] == -1 on the boundary
};

struct BoundaryEdge {
    int edge{-1};
    Vec2 normal; ///< outward unit normal
};

/// Conforming triangulation of a 2D polygonal domain. Immutable after construction.
///
/// Triangles are stored counterclockwise. Local edge e of a triangle joins local
/// vertices e and (e + 1) % 3.
class Mesh {
public:
    /// Builds topology from raw data. Clockwise triangles are reoriented; zero-area
    /// triangles, dangling indices and non-manifold edges throw MeshError.
    Mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles);

    [[nodiscard]] const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return boundary_edges_; }

    /// Global edge indices of the three local edges of triangle t.
    [[nodiscard]] const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_.at(t); }

    [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }
    [[nodiscard]] int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

    [[nodiscard]] double h_max() const noexcept { return h_max_; }
    [[nodiscard]] double area(int t) const;
    [[nodiscard]] double total_area() const;

    [[nodiscard]] ElementGeometry element_geometry(int t) const;

    /// Outward unit normal of boundary edge `e` (an index into boundary_edges()).
    [[nodiscard]] Vec2 boundary_normal(int e) const;

    /// Same as boundary_normal but addressed by global edge index; interior edges throw.
    [[nodiscard]] Vec2 edge_normal(int edge) const;

private:
    std::vector<Point2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<int> boundary_index_of_edge_;
    double h_max_{0.0};
};

/// Uniform m x m partition of [0,1]^2, each cell split along its lower-left to
/// upper-right diagonal.
[[nodiscard]] Mesh unit_square_mesh(int m);

/// Plain-text format: `V T`, then V lines `x y`, then T lines `i j k` (0-based).
/// Coordinates are written with 17 significant digits so that a reread is bit-exact.
void write_mesh(const Mesh& mesh, std::ostream& os);
void write_mesh(const Mesh& mesh, const std::string& path);
[[nodiscard]] Mesh read_mesh(std::istream& is);
[[nodiscard]] Mesh read_mesh(const std::string& path);

} // namespace chemorep
