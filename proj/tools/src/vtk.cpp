#include "chemorep/cli/vtk.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <fstream>

namespace chemorep::cli {

void write_vtk(const State& state, const std::filesystem::path& path)
{
    CHEMOREP_REQUIRE(state.u.space && state.sigma.space && state.v.space, "write_vtk: incomplete state");
    const Mesh& mesh = state.u.space->mesh();
    const int nv = mesh.num_vertices();
    const int nt = mesh.num_triangles();
    const int ns = state.sigma.space->n_scalar_dofs();

    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    os << "# vtk DataFile Version 3.0\n";
    os << fmt::format("chemorep n={} t={:.17g}\n", state.n, state.t);
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << fmt::format("POINTS {} double\n", nv);
    for (const auto& p : mesh.vertices()) os << fmt::format("{:.17g} {:.17g} 0\n", p.x, p.y);
    os << fmt::format("CELLS {} {}\n", nt, 4 * nt);
    for (const auto& t : mesh.triangles()) os << fmt::format("3 {} {} {}\n", t[0], t[1], t[2]);
    os << fmt::format("CELL_TYPES {}\n", nt);
    for (int t = 0; t < nt; ++t) os << "5\n";
    os << fmt::format("POINT_DATA {}\n", nv);
    os << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nv; ++i) os << fmt::format("{:.17g}\n", state.u.coefficients[i]);
    os << "SCALARS v double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nv; ++i) os << fmt::format("{:.17g}\n", state.v.coefficients[i]);
    os << "VECTORS sigma double\n";
    for (int i = 0; i < nv; ++i)
        os << fmt::format("{:.17g} {:.17g} 0\n", state.sigma.coefficients[i], state.sigma.coefficients[ns + i]);
    if (!os) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

VtkData read_vtk(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw IoError(fmt::format("cannot open '{}'", path.string()));
    const auto fail = [&](const std::string& what) {
        return IoError(fmt::format("'{}': {}", path.string(), what));
    };
    VtkData d;
    std::string word;
    int n_points = 0;
    while (is >> word) {
        if (word == "POINTS") {
            std::string type;
            is >> n_points >> type;
            d.points.resize(static_cast<std::size_t>(n_points));
            double z = 0.0;
            for (auto& p : d.points) is >> p.x >> p.y >> z;
        } else if (word == "CELLS") {
            int n = 0;
            int size = 0;
            is >> n >> size;
            d.cells.resize(static_cast<std::size_t>(n));
            for (auto& c : d.cells) {
                int k = 0;
                is >> k >> c[0] >> c[1] >> c[2];
                if (k != 3) throw fail("non-triangle cell");
            }
        } else if (word == "SCALARS") {
            std::string name;
            std::string type;
            std::string lookup;
            std::string table;
            int ncomp = 0;
            is >> name >> type >> ncomp >> lookup >> table;
            auto& values = d.scalars[name];
            values.resize(static_cast<std::size_t>(n_points));
            for (auto& v : values) is >> v;
        } else if (word == "VECTORS") {
            std::string name;
            std::string type;
            is >> name >> type;
            auto& values = d.vectors[name];
            values.resize(static_cast<std::size_t>(n_points));
            double z = 0.0;
            for (auto& v : values) is >> v.x >> v.y >> z;
        }
        if (is.fail()) throw fail("malformed legacy VTK data");
    }
    return d;
}

} // namespace chemorep::cli
