#include "chemorep/assembly.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <memory>
#include <optional>

namespace chemorep {

namespace {

const char* form_name(FormTag f)
{
    switch (f) {
    case FormTag::Mass: return "MASS";
    case FormTag::Stiffness: return "STIFFNESS";
    case FormTag::AForm: return "A_FORM";
    case FormTag::BForm: return "B_FORM";
    case FormTag::ConvUSigma: return "CONV_U_SIGMA";
    case FormTag::ConvGradU: return "CONV_GRADU";
    case FormTag::TransportFrozenSigma: return "TRANSPORT_FROZEN_SIGMA";
    case FormTag::ProductFrozenGradW: return "PRODUCT_FROZEN_GRADW";
    }
    return "?";
}

void check_arity(FormTag form, const FeSpace& test, const FeSpace& trial, const FormCoefficients& c)
{
    if (&test.mesh() != &trial.mesh())
        throw InvalidArgument(fmt::format("{}: test and trial spaces live on different meshes", form_name(form)));
    auto fail = [&](const char* why) { throw InvalidArgument(fmt::format("{}: {}", form_name(form), why)); };
    auto need_w = [&] {
        if (!c.w || !c.w->space || c.w->space->is_vector()) fail("requires a scalar coefficient w");
        if (&c.w->space->mesh() != &test.mesh()) fail("coefficient w lives on a different mesh");
    };
    switch (form) {
    case FormTag::Mass:
    case FormTag::Stiffness:
    case FormTag::AForm:
        if (test.components() != trial.components() || test.degree() != trial.degree())
            fail("test and trial spaces must be the same space");
        break;
    case FormTag::BForm:
        if (!test.is_vector() || !trial.is_vector() || test.degree() != trial.degree())
            fail("requires the same vector space for test and trial");
        break;
    case FormTag::ConvUSigma:
        if (test.is_vector() || !trial.is_vector()) fail("requires a scalar test space and a vector trial space");
        need_w();
        break;
    case FormTag::ConvGradU:
    case FormTag::ProductFrozenGradW:
        if (!test.is_vector() || trial.is_vector()) fail("requires a vector test space and a scalar trial space");
        need_w();
        break;
    case FormTag::TransportFrozenSigma:
        if (test.is_vector() || trial.is_vector()) fail("requires scalar test and trial spaces");
        if (!c.sigma || !c.sigma->space || !c.sigma->space->is_vector()) fail("requires a vector coefficient sigma");
        if (&c.sigma->space->mesh() != &test.mesh()) fail("coefficient sigma lives on a different mesh");
        break;
    }
}

} // namespace

void assemble_bilinear_into(CsrMatrix& a, FormTag form, const FeSpace& test, const FeSpace& trial,
                            FormCoefficients coeffs, int quad_degree)
{
    check_arity(form, test, trial, coeffs);
    CHEMOREP_REQUIRE(a.rows() == test.n_dofs() && a.cols() == trial.n_dofs(),
                     "assemble_bilinear_into: matrix size does not match the spaces");
    a.set_zero();

    const QuadratureRule& rule = quadrature(quad_degree);
    ElementValues tv(test, rule);
    std::optional<ElementValues> rv_own;
    if (&trial != &test) rv_own.emplace(trial, rule);
    ElementValues& rv = rv_own ? *rv_own : tv;
    std::optional<ElementValues> wv;
    if (coeffs.w) wv.emplace(*coeffs.w->space, rule);
    std::optional<ElementValues> sv;
    if (coeffs.sigma) sv.emplace(*coeffs.sigma->space, rule);

    const int nt = tv.num_dofs();
    const int nr = rv.num_dofs();
    const int ct = test.components();
    const int cr = trial.components();
    const int ns_test = test.n_scalar_dofs();
    const int ns_trial = trial.n_scalar_dofs();
    std::vector<double> local(static_cast<std::size_t>(ct * nt * cr * nr));
    auto L = [&](int c, int i, int d, int j) -> double& { return local[((c * nt + i) * cr + d) * nr + j]; };

    const Mesh& mesh = test.mesh();
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        tv.reinit(t);
        if (rv_own) rv.reinit(t);
        if (wv) wv->reinit(t);
        if (sv) sv->reinit(t);
        std::fill(local.begin(), local.end(), 0.0);

        for (int q = 0; q < tv.num_points(); ++q) {
            const double jxw = tv.jxw(q);
            ScalarEval w;
            if (wv) w = wv->scalar(*coeffs.w, q);
            VectorEval s;
            if (sv) s = sv->vector(*coeffs.sigma, q);

            for (int i = 0; i < nt; ++i) {
                const double pt = tv.phi(q, i);
                const Vec2& gt = tv.grad(q, i);
                for (int j = 0; j < nr; ++j) {
                    const double pr = rv.phi(q, j);
                    const Vec2& gr = rv.grad(q, j);
                    switch (form) {
                    case FormTag::Mass:
                        for (int c = 0; c < ct; ++c) L(c, i, c, j) += jxw * pt * pr;
                        break;
                    case FormTag::Stiffness:
                        for (int c = 0; c < ct; ++c) L(c, i, c, j) += jxw * dot(gt, gr);
                        break;
                    case FormTag::AForm:
                        for (int c = 0; c < ct; ++c) L(c, i, c, j) += jxw * (dot(gt, gr) + pt * pr);
                        break;
                    case FormTag::BForm: {
                        // psi = phi e_c: div psi = d_c phi, rot(phi e_x) = -d_y phi, rot(phi e_y) = d_x phi
                        const double div_t[2] = {gt.x, gt.y};
                        const double rot_t[2] = {-gt.y, gt.x};
                        const double div_r[2] = {gr.x, gr.y};
                        const double rot_r[2] = {-gr.y, gr.x};
                        for (int c = 0; c < 2; ++c)
                            for (int d = 0; d < 2; ++d)
                                L(c, i, d, j) +=
                                    jxw * (div_t[c] * div_r[d] + rot_t[c] * rot_r[d] + (c == d ? pt * pr : 0.0));
                        break;
                    }
                    case FormTag::ConvUSigma:
                        // trial psi_j = phi_j e_d, test grad phi_i
                        L(0, i, 0, j) += jxw * w.value * pr * gt.x;
                        L(0, i, 1, j) += jxw * w.value * pr * gt.y;
                        break;
                    case FormTag::ConvGradU:
                        // same products as ConvUSigma with the roles swapped, so the two are exact
                        // transposes up to the factor 2
                        L(0, i, 0, j) += 2.0 * (jxw * w.value * pt * gr.x);
                        L(1, i, 0, j) += 2.0 * (jxw * w.value * pt * gr.y);
                        break;
                    case FormTag::TransportFrozenSigma:
                        L(0, i, 0, j) += jxw * pr * dot(s.value, gt);
                        break;
                    case FormTag::ProductFrozenGradW:
                        L(0, i, 0, j) += 2.0 * (jxw * pr * w.gradient.x * pt);
                        L(1, i, 0, j) += 2.0 * (jxw * pr * w.gradient.y * pt);
                        break;
                    }
                }
            }
        }

        const auto td = tv.dofs();
        const auto rd = rv.dofs();
        for (int c = 0; c < ct; ++c)
            for (int i = 0; i < nt; ++i)
                for (int d = 0; d < cr; ++d)
                    for (int j = 0; j < nr; ++j) a.add(c * ns_test + td[i], d * ns_trial + rd[j], L(c, i, d, j));
    }
}

CsrMatrix assemble_bilinear(FormTag form, const FeSpace& test, const FeSpace& trial, FormCoefficients coeffs,
                            bool constrain, int quad_degree)
{
    check_arity(form, test, trial, coeffs);
    CsrMatrix a = test.sparsity_pattern(trial);
    assemble_bilinear_into(a, form, test, trial, coeffs, quad_degree);
    if (constrain) {
        if (test.is_vector() && trial.is_vector()) {
            constrain_symmetric(a, test.constrained_dofs());
        } else if (test.is_vector()) {
            zero_rows(a, test.constrained_dofs());
        } else if (trial.is_vector()) {
            zero_cols(a, trial.constrained_dofs());
        }
    }
    return a;
}

Vector assemble_source(const FeSpace& test, const std::function<double(Point2)>& f, int quad_degree)
{
    CHEMOREP_REQUIRE(!test.is_vector(), "assemble_source: scalar test space expected");
    CHEMOREP_REQUIRE(static_cast<bool>(f), "assemble_source: empty source function");
    ElementValues ev(test, quadrature(quad_degree));
    Vector b(static_cast<std::size_t>(test.n_dofs()), 0.0);
    for (int t = 0; t < test.mesh().num_triangles(); ++t) {
        ev.reinit(t);
        const auto dofs = ev.dofs();
        for (int q = 0; q < ev.num_points(); ++q) {
            const double fx = f(ev.point(q)) * ev.jxw(q);
            for (int i = 0; i < ev.num_dofs(); ++i) b[dofs[i]] += fx * ev.phi(q, i);
        }
    }
    return b;
}

Vector assemble_vector_source(const FeSpace& test, const std::function<Vec2(Point2)>& g, int quad_degree)
{
    CHEMOREP_REQUIRE(test.is_vector(), "assemble_vector_source: vector test space expected");
    CHEMOREP_REQUIRE(static_cast<bool>(g), "assemble_vector_source: empty source function");
    ElementValues ev(test, quadrature(quad_degree));
    const int ns = test.n_scalar_dofs();
    Vector b(static_cast<std::size_t>(test.n_dofs()), 0.0);
    for (int t = 0; t < test.mesh().num_triangles(); ++t) {
        ev.reinit(t);
        const auto dofs = ev.dofs();
        for (int q = 0; q < ev.num_points(); ++q) {
            const Vec2 gx = g(ev.point(q)) * ev.jxw(q);
            for (int i = 0; i < ev.num_dofs(); ++i) {
                b[dofs[i]] += gx.x * ev.phi(q, i);
                b[ns + dofs[i]] += gx.y * ev.phi(q, i);
            }
        }
    }
    return b;
}

Vector assemble_u_squared(const FeSpace& test, const FeFunction& u, int quad_degree)
{
    CHEMOREP_REQUIRE(!test.is_vector(), "assemble_u_squared: scalar test space expected");
    CHEMOREP_REQUIRE(u.space && !u.space->is_vector(), "assemble_u_squared: scalar u_h expected");
    CHEMOREP_REQUIRE(&u.space->mesh() == &test.mesh(), "assemble_u_squared: u_h lives on a different mesh");
    const QuadratureRule& rule = quadrature(quad_degree);
    ElementValues ev(test, rule);
    ElementValues uv(*u.space, rule);
    Vector b(static_cast<std::size_t>(test.n_dofs()), 0.0);
    for (int t = 0; t < test.mesh().num_triangles(); ++t) {
        ev.reinit(t);
        uv.reinit(t);
        const auto dofs = ev.dofs();
        for (int q = 0; q < ev.num_points(); ++q) {
            const double uq = uv.scalar(u, q).value;
            const double val = uq * uq * ev.jxw(q);
            for (int i = 0; i < ev.num_dofs(); ++i) b[dofs[i]] += val * ev.phi(q, i);
        }
    }
    return b;
}

Vector assemble_linear(RhsTag kind, const FeSpace& test, const LinearFormData& data, int quad_degree)
{
    switch (kind) {
    case RhsTag::L2Source:
        if (test.is_vector()) return assemble_vector_source(test, data.vector_source, quad_degree);
        return assemble_source(test, data.scalar_source, quad_degree);
    case RhsTag::USquared:
        CHEMOREP_REQUIRE(data.u != nullptr, "assemble_linear(U_SQUARED): u_h not supplied");
        return assemble_u_squared(test, *data.u, quad_degree);
    }
    throw InvalidArgument("assemble_linear: unknown RhsTag");
}

} // namespace chemorep
