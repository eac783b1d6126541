#include "chemorep/error.hpp"
#include "chemorep/mms.hpp"
#include "chemorep/scheme.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chemorep;

namespace {

Spaces spaces_on(int m) { return make_spaces(std::make_shared<const Mesh>(unit_square_mesh(m))); }

SolverConfig config(double k, double T, Method method)
{
    SolverConfig c;
    c.k = k;
    c.T = T;
    c.method = method;
    return c;
}

double l2_diff(const FeFunction& a, const FeFunction& b) { return difference_norms(a, b).l2; }

} // namespace

TEST(SolverConfig, Defaults)
{
    const SolverConfig c;
    EXPECT_EQ(c.k, 1e-5);
    EXPECT_EQ(c.T, 1e-3);
    EXPECT_EQ(c.method, Method::Newton);
    EXPECT_EQ(c.tol, 1e-6);
    EXPECT_EQ(c.num_steps(), 100);
    EXPECT_EQ(config(1, 1, Method::Picard).max_iterations(), 50);
    EXPECT_EQ(config(1, 1, Method::Newton).max_iterations(), 20);
}

TEST(SolverConfig, NonIntegralStepCountRejected)
{
    EXPECT_THROW((void)config(3e-4, 1e-3, Method::Newton).num_steps(), InvalidArgument);
    EXPECT_THROW(config(-1e-3, 1e-3, Method::Newton).validate(), InvalidArgument);
    EXPECT_EQ(config(1e-4, 1e-2, Method::Newton).num_steps(), 100);
}

TEST(SolverConfig, MethodNames)
{
    EXPECT_EQ(parse_method("picard"), Method::Picard);
    EXPECT_EQ(parse_method("newton"), Method::Newton);
    EXPECT_EQ(to_string(Method::Picard), "picard");
    EXPECT_THROW((void)parse_method("secant"), InvalidArgument);
}

TEST(Iterate, ConstantSolutionIsFixedPoint)
{
    const Spaces sp = spaces_on(6);
    const ConstantSolution exact(1.7);
    const State s0 = initialize_state(sp, exact.initial_data(0.0));
    for (Method m : {Method::Picard, Method::Newton}) {
        UsScheme scheme(sp, config(1e-3, 1e-3, m));
        const NonlinearResult r = m == Method::Picard ? scheme.picard_iterate(s0) : scheme.newton_iterate(s0);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(r.iterations, 1);
        EXPECT_LE(r.increments.front(), 1e-13);
        EXPECT_LE(oracle::max_abs_diff(r.u.coefficients, s0.u.coefficients), 1e-13);
        EXPECT_LE(oracle::max_abs(r.sigma.coefficients), 1e-13);
    }
}

TEST(Iterate, PicardHomogeneousContracts)
{
    const Spaces sp = spaces_on(20);
    const ManufacturedSolution exact;
    UsScheme scheme(sp, config(1e-4, 1e-3, Method::Picard));
    State s = initialize_state(sp, exact.initial_data(0.0));
    for (int n = 0; n < 5; ++n) {
        const NonlinearResult r = scheme.picard_iterate(s);
        ASSERT_TRUE(r.converged);
        EXPECT_LE(r.iterations, 10);
        for (std::size_t l = 1; l < r.increments.size(); ++l) EXPECT_LT(r.increments[l], r.increments[l - 1]);
        s = scheme.step(s).first;
    }
}

TEST(Iterate, PicardAndNewtonOnManufacturedStep)
{
    const Spaces sp = spaces_on(40);
    auto exact = std::make_shared<const ManufacturedSolution>();
    const State s0 = initialize_state(sp, exact->initial_data(0.0));
    UsScheme picard(sp, config(1e-5, 1e-3, Method::Picard), forcing_terms(exact));
    UsScheme newton(sp, config(1e-5, 1e-3, Method::Newton), forcing_terms(exact));
    const NonlinearResult p = picard.picard_iterate(s0);
    const NonlinearResult n = newton.newton_iterate(s0);
    ASSERT_TRUE(p.converged);
    ASSERT_TRUE(n.converged);
    EXPECT_LE(p.increments.back(), 1e-6);
    EXPECT_LE(n.iterations, 4);
    EXPECT_LE(n.iterations, p.iterations);
    EXPECT_LE(l2_diff(p.u, n.u), 1e-8);
    EXPECT_LE(l2_diff(p.sigma, n.sigma), 1e-8);
}

TEST(Iterate, LinearProblemSolvedByFirstIterate)
{
    // With u = 0 both transport terms vanish and the step reduces to two heat equations, so the
    // first iterate is already the solution and the second only confirms it.
    const Spaces sp = spaces_on(10);
    const ManufacturedSolution exact;
    State s0 = initialize_state(sp, exact.initial_data(0.0));
    std::fill(s0.u.coefficients.begin(), s0.u.coefficients.end(), 0.0);
    for (Method m : {Method::Picard, Method::Newton}) {
        UsScheme scheme(sp, config(1e-3, 1e-3, m));
        const NonlinearResult r = m == Method::Picard ? scheme.picard_iterate(s0) : scheme.newton_iterate(s0);
        ASSERT_TRUE(r.converged);
        ASSERT_EQ(r.iterations, 2);
        EXPECT_LE(r.increments_u[1], 1e-14);
        EXPECT_LE(r.increments_sigma[1], 1e-12 * r.increments_sigma[0]);
    }
}

TEST(Iterate, KrylovMatchesDirect)
{
    const Spaces sp = spaces_on(12);
    auto exact = std::make_shared<const ManufacturedSolution>();
    const State s0 = initialize_state(sp, exact->initial_data(0.0));
    SolverConfig c = config(1e-4, 1e-4, Method::Newton);
    UsScheme direct(sp, c, forcing_terms(exact));
    c.linear_solver = LinearSolverKind::Krylov;
    c.linear_tol = 1e-13;
    UsScheme krylov(sp, c, forcing_terms(exact));
    const auto a = direct.step(s0).first;
    const auto b = krylov.step(s0).first;
    EXPECT_LE(l2_diff(a.u, b.u), 1e-9);
    EXPECT_LE(l2_diff(a.sigma, b.sigma), 1e-9);
}

TEST(Iterate, CapExceededCarriesHistory)
{
    const Spaces sp = spaces_on(8);
    const ManufacturedSolution exact;
    SolverConfig c = config(1e-3, 1e-3, Method::Picard);
    c.max_nl_iter = 2;
    c.tol = 1e-300;
    c.roundoff_floor = 0.0;
    UsScheme scheme(sp, c);
    const State s0 = initialize_state(sp, exact.initial_data(0.0));
    try {
        (void)scheme.step(s0);
        FAIL();
    } catch (const NonlinearSolveError& e) {
        EXPECT_EQ(e.increments().size(), 2u);
    }
}

TEST(RecoverV, ZeroStaysZero)
{
    const Spaces sp = spaces_on(5);
    UsScheme scheme(sp, config(1e-2, 1e-2, Method::Newton));
    const FeFunction v = scheme.recover_v(FeFunction(sp.v), FeFunction(sp.u), 0.01);
    EXPECT_EQ(oracle::max_abs(v.coefficients), 0.0);
}

TEST(RecoverV, ConstantSteadyState)
{
    const Spaces sp = spaces_on(5);
    UsScheme scheme(sp, config(1e-2, 1e-2, Method::Newton));
    const FeFunction v = scheme.recover_v(FeFunction(sp.v, Vector(sp.v->n_dofs(), 1.0)),
                                          FeFunction(sp.u, Vector(sp.u->n_dofs(), 1.0)), 0.01);
    for (double c : v.coefficients) EXPECT_NEAR(c, 1.0, 1e-12);
}

TEST(RecoverV, ManufacturedErrorsFinite)
{
    const Spaces sp = spaces_on(40);
    auto exact = std::make_shared<const ManufacturedSolution>();
    UsScheme scheme(sp, config(1e-5, 1e-5, Method::Newton), forcing_terms(exact));
    const auto [s1, rep] = scheme.step(initialize_state(sp, exact->initial_data(0.0)));
    const NormSet e = error_norms(s1.v, exact->v_field(s1.t));
    EXPECT_TRUE(std::isfinite(e.h1));
    EXPECT_LT(e.h1, 1e-1);
}

TEST(Step, HomogeneousInvariants)
{
    const Spaces sp = spaces_on(10);
    const ManufacturedSolution exact;
    UsScheme scheme(sp, config(1e-3, 2e-2, Method::Newton));
    const State s0 = initialize_state(sp, exact.initial_data(0.0));
    const double m0 = scheme.mass(s0.u);
    double e_prev = scheme.energy(s0);
    const RunResult r = scheme.run(s0);
    ASSERT_EQ(r.reports.size(), 20u);
    for (const auto& rep : r.reports) {
        EXPECT_LE(std::abs(rep.energy_law_residual), 1e-8 * std::max(1.0, rep.dissipation)) << rep.n;
        EXPECT_LE(rep.energy, e_prev) << rep.n;
        EXPECT_NEAR(rep.mass, m0, 1e-10) << rep.n;
        EXPECT_NEAR(rep.mass, 2.0, 1e-10) << rep.n;
        EXPECT_LE(std::abs(rep.v_mass_balance_residual), 1e-9 * rep.v_mass_balance_scale) << rep.n;
        EXPECT_EQ(rep.forcing_work, 0.0);
        e_prev = rep.energy;
    }
}

TEST(Step, EnergyMatchesDefinition)
{
    const Spaces sp = spaces_on(6);
    const ManufacturedSolution exact;
    UsScheme scheme(sp, config(1e-3, 1e-3, Method::Newton));
    const State s0 = initialize_state(sp, exact.initial_data(0.0));
    const double e = 0.5 * std::pow(norms(s0.u).l2, 2) + 0.25 * std::pow(norms(s0.sigma).l2, 2);
    EXPECT_NEAR(scheme.energy(s0), e, 1e-12 * e);
    EXPECT_NEAR(scheme.mass(s0.u), integral(s0.u), 1e-13);
}

TEST(Step, SchemeResidualAfterConvergence)
{
    const Spaces sp = spaces_on(20);
    auto exact = std::make_shared<const ManufacturedSolution>();
    for (Method m : {Method::Picard, Method::Newton}) {
        const SolverConfig c = config(1e-5, 1e-5, m);
        UsScheme scheme(sp, c, forcing_terms(exact));
        const State s0 = initialize_state(sp, exact->initial_data(0.0));
        const auto [s1, rep] = scheme.step(s0);
        const double scale = (norms(s1.u).l2 + norms(s1.sigma).l2) / c.k;
        EXPECT_GE(rep.scheme_residual, 0.0);
        EXPECT_LE(rep.scheme_residual, 10.0 * c.tol * scale) << to_string(m);
        // a wrong candidate is far off
        const FeFunction zu(sp.u, Vector(sp.u->n_dofs(), 0.0));
        const FeFunction zs(sp.sigma, Vector(sp.sigma->n_dofs(), 0.0));
        EXPECT_GT(scheme.scheme_residual(s0, zu, zs), 10.0 * c.tol * scale);
    }
}

TEST(Step, ForcingEvaluatedAtNewTime)
{
    const Spaces sp = spaces_on(4);
    Forcing f;
    double seen = -1.0;
    f.f = [&](Point2, double t) {
        seen = t;
        return 0.0;
    };
    UsScheme scheme(sp, config(0.25, 1.0, Method::Newton), f);
    State s0 = initialize_state(sp, ConstantSolution(1.0).initial_data(0.0));
    s0.n = 2;
    s0.t = 0.5;
    (void)scheme.step(s0);
    EXPECT_DOUBLE_EQ(seen, 0.75);
}

TEST(Run, SingleStepReducesToStep)
{
    const Spaces sp = spaces_on(8);
    auto exact = std::make_shared<const ManufacturedSolution>();
    const State s0 = initialize_state(sp, exact->initial_data(0.0));
    UsScheme a(sp, config(1e-4, 1e-4, Method::Newton), forcing_terms(exact));
    UsScheme b(sp, config(1e-4, 1e-4, Method::Newton), forcing_terms(exact));
    const RunResult r = a.run(s0);
    const auto [s1, rep] = b.step(s0);
    ASSERT_EQ(r.reports.size(), 1u);
    EXPECT_EQ(r.final_state.u.coefficients, s1.u.coefficients);
    EXPECT_EQ(r.final_state.sigma.coefficients, s1.sigma.coefficients);
    EXPECT_EQ(r.final_state.v.coefficients, s1.v.coefficients);
    EXPECT_EQ(r.final_state.n, 1);
    ASSERT_EQ(r.snapshots.size(), 1u);
}

TEST(Run, SnapshotStride)
{
    const Spaces sp = spaces_on(4);
    UsScheme scheme(sp, config(1e-3, 1e-2, Method::Newton));
    const RunResult r = scheme.run(initialize_state(sp, ManufacturedSolution().initial_data(0.0)), 4);
    std::vector<int> ns;
    for (const auto& s : r.snapshots) ns.push_back(s.n);
    EXPECT_EQ(ns, (std::vector<int>{4, 8, 10}));
}

TEST(Run, UniquenessWarning)
{
    const Spaces sp = spaces_on(4);
    SolverConfig c = config(1e-3, 1e-3, Method::Newton);
    c.uniqueness_threshold = 1e-12;
    UsScheme scheme(sp, c);
    const auto [s1, rep] = scheme.step(initialize_state(sp, ManufacturedSolution().initial_data(0.0)));
    EXPECT_TRUE(rep.uniqueness_warning);
    EXPECT_GT(rep.uniqueness_indicator, 0.0);
    SolverConfig quiet = c;
    quiet.uniqueness_threshold = 1e300;
    UsScheme scheme2(sp, quiet);
    EXPECT_FALSE(scheme2.step(initialize_state(sp, ManufacturedSolution().initial_data(0.0))).second.uniqueness_warning);
}
