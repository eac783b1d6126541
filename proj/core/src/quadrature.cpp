#include "chemorep/quadrature.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

namespace chemorep {

namespace {

// Orbits in barycentric coordinates. Weights below are already scaled to the reference area.
void add_centroid(QuadratureRule& r, double w)
{
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(w);
}

// (a, a, 1 - 2a) and its 3 permutations
void add_orbit3(QuadratureRule& r, double w, double a)
{
    const double b = 1.0 - 2.0 * a;
    for (const auto& p : {Point2{a, a}, Point2{a, b}, Point2{b, a}}) {
        r.points.push_back(p);
        r.weights.push_back(w);
    }
}

// (a, b, 1 - a - b) and its 6 permutations
void add_orbit6(QuadratureRule& r, double w, double a, double b)
{
    const double c = 1.0 - a - b;
    for (const auto& p : {Point2{b, c}, Point2{c, b}, Point2{a, c}, Point2{c, a}, Point2{a, b}, Point2{b, a}}) {
        r.points.push_back(p);
        r.weights.push_back(w);
    }
}

QuadratureRule make_rule(int degree)
{
    QuadratureRule r;
    r.degree = degree;
    switch (degree) {
    case 1:
        add_centroid(r, 0.5);
        break;
    case 2:
        add_orbit3(r, 1.0 / 6.0, 1.0 / 6.0);
        break;
    case 3:
    case 4:
        r.degree = 4;
        add_orbit3(r, 0.05497587182766093381916316, 0.09157621350977074345957146);
        add_orbit3(r, 0.1116907948390057328475035, 0.4459484909159648863183293);
        break;
    case 5: {
        const double s15 = std::sqrt(15.0);
        add_centroid(r, 9.0 / 80.0);
        add_orbit3(r, (155.0 - s15) / 2400.0, (6.0 - s15) / 21.0);
        add_orbit3(r, (155.0 + s15) / 2400.0, (6.0 + s15) / 21.0);
        break;
    }
    case 6:
        add_orbit3(r, 0.0254224531851034084604684, 0.0630890144915022283403316);
        add_orbit3(r, 0.05839313786318968301264481, 0.2492867451709104212916386);
        add_orbit6(r, 0.04142553780918678759677673, 0.05314504984481694735324967, 0.3103524510337844054166077);
        break;
    default:
        throw InvalidArgument(fmt::format("quadrature: unsupported degree {} (supported: 1..6)", degree));
    }
    return r;
}

} // namespace

const QuadratureRule& quadrature(int degree)
{
    if (degree < 1 || degree > 6)
        throw InvalidArgument(fmt::format("quadrature: unsupported degree {} (supported: 1..6)", degree));
    static const std::array<QuadratureRule, 6> rules{make_rule(1), make_rule(2), make_rule(3),
                                                     make_rule(4), make_rule(5), make_rule(6)};
    return rules[degree - 1];
}

} // namespace chemorep
