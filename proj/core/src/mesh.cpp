#include "chemorep/mesh.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

namespace chemorep {

Mesh::Mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    const int nv = num_vertices();
    const int nt = num_triangles();
    if (nt == 0) throw MeshError("mesh has no triangles");

    for (int t = 0; t < nt; ++t) {
        auto& tri = triangles_[t];
        for (int v : tri) {
            if (v < 0 || v >= nv)
                throw MeshError(fmt::format("triangle {} references vertex {} (mesh has {} vertices)", t, v, nv));
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw MeshError(fmt::format("triangle {} repeats a vertex", t));
        const double d = cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
        if (d == 0.0) throw MeshError(fmt::format("triangle {} is degenerate (zero area)", t));
        if (d < 0.0) std::swap(tri[1], tri[2]);
    }

    // (v_lo, v_hi, triangle, local edge), sorted so shared edges are adjacent
    std::vector<std::tuple<int, int, int, int>> half;
    half.reserve(3 * static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        for (int e = 0; e < 3; ++e) {
            int a = triangles_[t][e];
            int b = triangles_[t][(e + 1) % 3];
            half.emplace_back(std::min(a, b), std::max(a, b), t, e);
        }
    }
    std::sort(half.begin(), half.end());

    triangle_edges_.assign(nt, {-1, -1, -1});
    for (std::size_t i = 0; i < half.size();) {
        std::size_t j = i;
        while (j < half.size() && std::get<0>(half[j]) == std::get<0>(half[i]) &&
               std::get<1>(half[j]) == std::get<1>(half[i]))
            ++j;
        if (j - i > 2)
            throw MeshError(fmt::format("edge ({}, {}) is shared by {} triangles", std::get<0>(half[i]),
                                        std::get<1>(half[i]), j - i));
        Edge edge;
        edge.vertices = {std::get<0>(half[i]), std::get<1>(half[i])};
        const int id = static_cast<int>(edges_.size());
        for (std::size_t k = i; k < j; ++k) {
            edge.triangles[k - i] = std::get<2>(half[k]);
            triangle_edges_[std::get<2>(half[k])][std::get<3>(half[k])] = id;
        }
        edges_.push_back(edge);
        i = j;
    }

    boundary_index_of_edge_.assign(edges_.size(), -1);
    for (int id = 0; id < num_edges(); ++id) {
        const Edge& edge = edges_[id];
        if (edge.triangles[1] != -1) continue;
        const int t = edge.triangles[0];
        const auto& tri = triangles_[t];
        int local = 0;
        while (triangle_edges_[t][local] != id) ++local;
        const Vec2 d = vertices_[tri[(local + 1) % 3]] - vertices_[tri[local]];
        const double len = norm(d);
        boundary_index_of_edge_[id] = static_cast<int>(boundary_edges_.size());
        boundary_edges_.push_back({id, Vec2{d.y / len, -d.x / len}});
    }

    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        for (int e = 0; e < 3; ++e)
            h_max_ = std::max(h_max_, norm(vertices_[tri[(e + 1) % 3]] - vertices_[tri[e]]));
    }
}

double Mesh::area(int t) const
{
    return 0.5 * element_geometry(t).det;
}

double Mesh::total_area() const
{
    double a = 0.0;
    for (int t = 0; t < num_triangles(); ++t) a += area(t);
    return a;
}

ElementGeometry Mesh::element_geometry(int t) const
{
    if (t < 0 || t >= num_triangles())
        throw InvalidArgument(fmt::format("triangle index {} out of range [0, {})", t, num_triangles()));
    const auto& tri = triangles_[t];
    const Vec2 e1 = vertices_[tri[1]] - vertices_[tri[0]];
    const Vec2 e2 = vertices_[tri[2]] - vertices_[tri[0]];
    ElementGeometry g;
    g.jacobian = Mat2{{{{e1.x, e2.x}, {e1.y, e2.y}}}};
    g.det = g.jacobian.det();
    if (!(g.det > 0.0)) throw MeshError(fmt::format("triangle {} is degenerate (det = {})", t, g.det));
    const double inv = 1.0 / g.det;
    // (J^{-1})^T = (1/det) [[J11, -J10], [-J01, J00]]
    g.inverse_transpose = Mat2{{{{e2.y * inv, -e1.y * inv}, {-e2.x * inv, e1.x * inv}}}};
    return g;
}

Vec2 Mesh::boundary_normal(int e) const
{
    if (e < 0 || e >= static_cast<int>(boundary_edges_.size()))
        throw InvalidArgument(fmt::format("boundary edge index {} out of range [0, {})", e, boundary_edges_.size()));
    return boundary_edges_[e].normal;
}

Vec2 Mesh::edge_normal(int edge) const
{
    if (edge < 0 || edge >= num_edges())
        throw InvalidArgument(fmt::format("edge index {} out of range [0, {})", edge, num_edges()));
    const int b = boundary_index_of_edge_[edge];
    if (b < 0) throw InvalidArgument(fmt::format("edge {} is an interior edge and has no outward normal", edge));
    return boundary_edges_[b].normal;
}

Mesh unit_square_mesh(int m)
{
    if (m < 1) throw InvalidArgument(fmt::format("unit_square_mesh: m must be >= 1, got {}", m));
    const int n1 = m + 1;
    std::vector<Point2> vertices;
    vertices.reserve(static_cast<std::size_t>(n1) * n1);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            vertices.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(2 * static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const int v00 = j * n1 + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + n1;
            const int v11 = v01 + 1;
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

void write_mesh(const Mesh& mesh, std::ostream& os)
{
    os << fmt::format("{} {}\n", mesh.num_vertices(), mesh.num_triangles());
    for (const auto& p : mesh.vertices()) os << fmt::format("{:.17g} {:.17g}\n", p.x, p.y);
    for (const auto& t : mesh.triangles()) os << fmt::format("{} {} {}\n", t[0], t[1], t[2]);
    if (!os) throw IoError("failed writing mesh stream");
}

void write_mesh(const Mesh& mesh, const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path));
    write_mesh(mesh, os);
    if (!os) throw IoError(fmt::format("failed writing '{}'", path));
}

Mesh read_mesh(std::istream& is)
{
    long long nv = 0;
    long long nt = 0;
    if (!(is >> nv >> nt) || nv < 3 || nt < 1) throw IoError("mesh header must be `V T` with V >= 3, T >= 1");
    std::vector<Point2> vertices(static_cast<std::size_t>(nv));
    for (auto& p : vertices) {
        if (!(is >> p.x >> p.y)) throw IoError("truncated vertex block in mesh file");
    }
    std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
    for (auto& t : triangles) {
        if (!(is >> t[0] >> t[1] >> t[2])) throw IoError("truncated triangle block in mesh file");
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

Mesh read_mesh(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw IoError(fmt::format("cannot open '{}' for reading", path));
    return read_mesh(is);
}

} // namespace chemorep
