#include "chemorep/norms.hpp"

#include "chemorep/error.hpp"

#include <cmath>

namespace chemorep {

namespace {

struct Sums {
    double l2{0.0};
    double semi{0.0};
    double mean{0.0};
    double div{0.0};
    double rot{0.0};
    Vec2 vmean;
    bool vector{false};
    bool has_gradient{true};

    [[nodiscard]] NormSet finish() const
    {
        NormSet r;
        r.l2 = std::sqrt(l2);
        if (!has_gradient) return r;
        r.h1_semi = std::sqrt(semi);
        r.h1 = std::sqrt(l2 + semi);
        r.h1_equivalent = vector ? std::sqrt(div + rot + l2) : std::sqrt(semi + mean * mean);
        return r;
    }
};

double frob2(const Mat2& a)
{
    return a(0, 0) * a(0, 0) + a(0, 1) * a(0, 1) + a(1, 0) * a(1, 0) + a(1, 1) * a(1, 1);
}

Mat2 sub(const Mat2& a, const Mat2& b)
{
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

} // namespace

NormSet error_norms(const FeFunction& fn, const ScalarField& exact, int quad_degree)
{
    CHEMOREP_REQUIRE(fn.space && !fn.space->is_vector(), "error_norms: scalar function expected");
    ElementValues ev(*fn.space, quadrature(quad_degree));
    Sums s;
    s.has_gradient = static_cast<bool>(exact.gradient);
    for (int t = 0; t < fn.space->mesh().num_triangles(); ++t) {
        ev.reinit(t);
        for (int q = 0; q < ev.num_points(); ++q) {
            const ScalarEval h = ev.scalar(fn, q);
            const double jxw = ev.jxw(q);
            const double e = h.value - (exact.value ? exact.value(ev.point(q)) : 0.0);
            s.l2 += jxw * e * e;
            s.mean += jxw * e;
            if (s.has_gradient) {
                const Vec2 g = h.gradient - exact.gradient(ev.point(q));
                s.semi += jxw * dot(g, g);
            }
        }
    }
    return s.finish();
}

NormSet error_norms(const FeFunction& fn, const VectorField& exact, int quad_degree)
{
    CHEMOREP_REQUIRE(fn.space && fn.space->is_vector(), "error_norms: vector function expected");
    ElementValues ev(*fn.space, quadrature(quad_degree));
    Sums s;
    s.vector = true;
    s.has_gradient = static_cast<bool>(exact.jacobian);
    for (int t = 0; t < fn.space->mesh().num_triangles(); ++t) {
        ev.reinit(t);
        for (int q = 0; q < ev.num_points(); ++q) {
            const VectorEval h = ev.vector(fn, q);
            const double jxw = ev.jxw(q);
            const Vec2 e = h.value - (exact.value ? exact.value(ev.point(q)) : Vec2{});
            s.l2 += jxw * dot(e, e);
            if (s.has_gradient) {
                const Mat2 j = sub(h.jacobian, exact.jacobian(ev.point(q)));
                s.semi += jxw * frob2(j);
                s.div += jxw * divergence(j) * divergence(j);
                s.rot += jxw * rot(j) * rot(j);
            }
        }
    }
    return s.finish();
}

NormSet norms(const FeFunction& fn, int quad_degree)
{
    CHEMOREP_REQUIRE(fn.space != nullptr, "norms: function without a space");
    if (fn.space->is_vector()) return error_norms(fn, VectorField{{}, [](Point2) { return Mat2{}; }}, quad_degree);
    return error_norms(fn, ScalarField{{}, [](Point2) { return Vec2{}; }}, quad_degree);
}

NormSet difference_norms(const FeFunction& a, const FeFunction& b, int quad_degree)
{
    CHEMOREP_REQUIRE(a.space && b.space, "difference_norms: function without a space");
    CHEMOREP_REQUIRE(a.space->n_dofs() == b.space->n_dofs() && a.space->degree() == b.space->degree() &&
                         &a.space->mesh() == &b.space->mesh(),
                     "difference_norms: functions live on different spaces");
    FeFunction d(a.space, a.coefficients);
    for (std::size_t i = 0; i < d.coefficients.size(); ++i) d.coefficients[i] -= b.coefficients[i];
    return norms(d, quad_degree);
}

double integral(const FeFunction& fn, int quad_degree)
{
    CHEMOREP_REQUIRE(fn.space && !fn.space->is_vector(), "integral: scalar function expected");
    ElementValues ev(*fn.space, quadrature(quad_degree));
    double sum = 0.0;
    for (int t = 0; t < fn.space->mesh().num_triangles(); ++t) {
        ev.reinit(t);
        for (int q = 0; q < ev.num_points(); ++q) sum += ev.jxw(q) * ev.scalar(fn, q).value;
    }
    return sum;
}

double integral(const Mesh& mesh, const std::function<double(Point2)>& f, int quad_degree)
{
    const QuadratureRule& rule = quadrature(quad_degree);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = mesh.element_geometry(t);
        const Point2 origin = mesh.vertices()[mesh.triangles()[t][0]];
        for (int q = 0; q < rule.size(); ++q) sum += rule.weights[q] * g.det * f(origin + g.jacobian * rule.points[q]);
    }
    return sum;
}

} // namespace chemorep
