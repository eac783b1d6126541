#include "chemorep/error.hpp"
#include "chemorep/mms.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace chemorep;

namespace {

/// u affine, v constant: every field lies in its discrete space.
class AffineSolution final : public ExactSolution {
public:
    double u(Point2 p, double) const override { return 1.0 + p.x - 0.5 * p.y; }
    Vec2 grad_u(Point2, double) const override { return {1.0, -0.5}; }
    double laplacian_u(Point2, double) const override { return 0.0; }
    double u_t(Point2, double) const override { return 0.0; }
    double v(Point2, double) const override { return 3.0; }
    Vec2 grad_v(Point2, double) const override { return {}; }
    double laplacian_v(Point2, double) const override { return 0.0; }
    double v_t(Point2, double) const override { return 0.0; }
    Vec2 sigma(Point2, double) const override { return {}; }
    Mat2 grad_sigma(Point2, double) const override { return {}; }
    Vec2 sigma_t(Point2, double) const override { return {}; }
    Vec2 grad_div_sigma(Point2, double) const override { return {}; }
};

std::vector<Point2> random_points(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<Point2> pts(n);
    for (auto& p : pts) p = {d(rng), d(rng)};
    return pts;
}

} // namespace

TEST(Forcing, FiniteDifferenceOracle)
{
    const auto check = oracle::check_forcing(std::make_shared<const ManufacturedSolution>(), 50);
    EXPECT_LE(check.max_f, 1e-6);
    EXPECT_LE(check.max_g, 1e-6);
    EXPECT_LE(check.max_h, 1e-6);
}

TEST(Forcing, FiniteDifferenceOracleOnShortHorizon)
{
    const auto check = oracle::check_forcing(std::make_shared<const ManufacturedSolution>(), 50, 99, 1e-3);
    EXPECT_LE(check.worst(), 1e-6);
}

TEST(Forcing, ConstantSolutionNeedsNone)
{
    const auto check = oracle::check_forcing(std::make_shared<const ConstantSolution>(2.0), 20);
    EXPECT_LE(check.worst(), 1e-6);
    const Forcing f = forcing_terms(std::make_shared<const ConstantSolution>(2.0));
    EXPECT_NEAR(f.f({0.3, 0.4}, 0.1), 0.0, 1e-15);
    EXPECT_NEAR(f.h({0.3, 0.4}, 0.1), 0.0, 1e-15);
    EXPECT_NEAR(norm(f.g({0.3, 0.4}, 0.1)), 0.0, 1e-15);
}

TEST(ExactSolution, SigmaIsGradientOfV)
{
    const ManufacturedSolution e;
    for (const Point2 p : random_points(50, 1)) {
        const double t = p.x * 0.7;
        const Vec2 s = e.sigma(p, t);
        const Vec2 g = e.grad_v(p, t);
        EXPECT_NEAR(s.x, g.x, 1e-12);
        EXPECT_NEAR(s.y, g.y, 1e-12);
        const oracle::ScalarFn v = [&](Point2 q) { return e.v(q, t); };
        EXPECT_NEAR(s.x, oracle::d1(v, p, 0, 1e-3), 1e-7);
        EXPECT_NEAR(s.y, oracle::d1(v, p, 1, 1e-3), 1e-7);
    }
}

TEST(ExactSolution, DerivativesAgreeWithFiniteDifferences)
{
    const ManufacturedSolution e;
    for (const Point2 p : random_points(30, 2)) {
        const double t = 0.4;
        const oracle::ScalarFn u = [&](Point2 q) { return e.u(q, t); };
        EXPECT_NEAR(e.grad_u(p, t).x, oracle::d1(u, p, 0, 1e-3), 1e-7);
        EXPECT_NEAR(e.grad_u(p, t).y, oracle::d1(u, p, 1, 1e-3), 1e-7);
        EXPECT_NEAR(e.laplacian_u(p, t), oracle::d2(u, p, 0, 1e-3) + oracle::d2(u, p, 1, 1e-3), 1e-6);
        const oracle::ScalarFn sx = [&](Point2 q) { return e.sigma(q, t).x; };
        const oracle::ScalarFn sy = [&](Point2 q) { return e.sigma(q, t).y; };
        const Mat2 j = e.grad_sigma(p, t);
        EXPECT_NEAR(j(0, 0), oracle::d1(sx, p, 0, 1e-3), 1e-6);
        EXPECT_NEAR(j(0, 1), oracle::d1(sx, p, 1, 1e-3), 1e-6);
        EXPECT_NEAR(j(1, 0), oracle::d1(sy, p, 0, 1e-3), 1e-6);
        EXPECT_NEAR(j(1, 1), oracle::d1(sy, p, 1, 1e-3), 1e-6);
        EXPECT_NEAR(e.u_t(p, t), oracle::dt([&](double s) { return e.u(p, s); }, t, 1e-5), 1e-9);
        EXPECT_NEAR(e.v_t(p, t), oracle::dt([&](double s) { return e.v(p, s); }, t, 1e-5), 1e-9);
    }
}

TEST(ExactSolution, SigmaIsRotFree)
{
    const ManufacturedSolution e;
    for (const Point2 p : random_points(50, 3)) {
        EXPECT_NEAR(rot(e.grad_sigma(p, 0.2)), 0.0, 1e-12);
        EXPECT_EQ(e.curl_rot_sigma(p, 0.2), (Vec2{}));
    }
}

TEST(ExactSolution, NormalComponentVanishesOnBoundary)
{
    const ManufacturedSolution e;
    for (const Point2 p : random_points(25, 4)) {
        EXPECT_NEAR(e.sigma({0.0, p.y}, 0.5).x, 0.0, 1e-12);
        EXPECT_NEAR(e.sigma({1.0, p.y}, 0.5).x, 0.0, 1e-12);
        EXPECT_NEAR(e.sigma({p.x, 0.0}, 0.5).y, 0.0, 1e-12);
        EXPECT_NEAR(e.sigma({p.x, 1.0}, 0.5).y, 0.0, 1e-12);
    }
}

TEST(ExactSolution, RitzProjectionOfSigmaNearlyRotFree)
{
    const ManufacturedSolution e;
    double prev = 0.0;
    for (int m : {10, 20, 40}) {
        auto sp = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(unit_square_mesh(m)), 1, 2);
        const FeFunction s = ritz_project(ProjectionProblem(sp), e.sigma_field(0.0));
        const QuadratureRule& rule = quadrature(6);
        ElementValues ev(*sp, rule);
        double rot2 = 0.0;
        for (int t = 0; t < sp->mesh().num_triangles(); ++t) {
            ev.reinit(t);
            for (int q = 0; q < ev.num_points(); ++q) rot2 += ev.jxw(q) * std::pow(ev.vector(s, q).rot(), 2);
        }
        if (m > 10) {
            EXPECT_LT(rot2, prev) << m;
        }
        prev = rot2;
    }
}

TEST(ErrorAccumulator, AggregatesMatchBruteForce)
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (bool l2_init : {false, true})
        for (bool max_init : {false, true}) {
            const double k = 0.01;
            ErrorAccumulator acc(k, {l2_init, max_init});
            for (int n = 0; n <= 7; ++n) {
                StepErrors e;
                e.n = n;
                e.t = n * k;
                for (FieldErrors* f : {&e.u, &e.sigma, &e.v})
                    for (NormSet* s : {&f->total, &f->discrete}) {
                        s->l2 = d(rng);
                        s->h1 = d(rng);
                    }
                acc.record(e);
            }
            for (Field f : {Field::U, Field::Sigma, Field::V})
                for (ErrorKind kind : {ErrorKind::Total, ErrorKind::Discrete})
                    for (SpatialNorm sn : {SpatialNorm::L2, SpatialNorm::H1}) {
                        double mx = 0.0, ss = 0.0;
                        for (const auto& r : acc.records()) {
                            const double v = r.value(f, kind, sn);
                            if (r.n > 0 || max_init) mx = std::max(mx, v);
                            if (r.n > 0 || l2_init) ss += k * v * v;
                        }
                        EXPECT_DOUBLE_EQ(acc.aggregate(f, kind, sn, TimeNorm::Max), mx);
                        EXPECT_NEAR(acc.aggregate(f, kind, sn, TimeNorm::L2), std::sqrt(ss), 1e-15);
                    }
        }
}

TEST(ErrorAccumulator, DefaultsIncludeInitialOnlyInMax)
{
    const AggregationOptions o;
    EXPECT_FALSE(o.l2_includes_initial);
    EXPECT_TRUE(o.max_includes_initial);
}

TEST(RecordStep, DiscreteFieldsAsExactGiveZero)
{
    const AffineSolution exact;
    const Spaces sp = make_spaces(std::make_shared<const Mesh>(unit_square_mesh(5)));
    const Projectors proj(sp);
    State s;
    s.u = interpolate(sp.u, [&](Point2 p) { return exact.u(p, 0.0); });
    s.sigma = FeFunction(sp.sigma);
    s.v = interpolate(sp.v, [](Point2) { return 3.0; });
    ErrorAccumulator acc(1e-3);
    record_step(acc, s, exact, proj);
    for (Field f : {Field::U, Field::Sigma, Field::V})
        for (ErrorKind kind : {ErrorKind::Total, ErrorKind::Discrete})
            for (SpatialNorm sn : {SpatialNorm::L2, SpatialNorm::H1})
                EXPECT_LE(acc.records()[0].value(f, kind, sn), 1e-12);
}

TEST(RunMms, ConstantSolutionHasZeroAggregates)
{
    MmsOptions o;
    o.m = 6;
    o.solver.k = 1e-3;
    o.solver.T = 3e-3;
    const MmsResult r = run_mms(o, std::make_shared<const ConstantSolution>(1.3));
    ASSERT_EQ(r.errors.records().size(), 4u);
    for (const auto& spec : standard_tables())
        EXPECT_LE(r.errors.aggregate(spec.field, spec.kind, spec.space, spec.time), 1e-12) << spec.name;
}

TEST(RunMms, DiscreteErrorObeysTriangleInequality)
{
    MmsOptions o;
    o.m = 10;
    o.solver.k = 1e-4;
    o.solver.T = 5e-4;
    auto exact = std::make_shared<const ManufacturedSolution>();
    const MmsResult r = run_mms(o, exact);
    const Spaces sp = make_spaces(r.run.final_state.u.space->mesh_ptr());
    const Projectors proj(sp);
    const State& s = r.run.final_state;
    const FeFunction ru = ritz_project(proj.u, exact->u_field(s.t));
    const double interp = error_norms(ru, exact->u_field(s.t)).l2;
    const StepErrors& e = r.errors.records().back();
    EXPECT_LE(e.u.discrete.l2, interp + e.u.total.l2 + 1e-14);
    EXPECT_EQ(r.errors.records().size(), 6u);
    EXPECT_EQ(r.errors.records().front().n, 0);
}

TEST(ConvergenceTable, TableOneOrder)
{
    const auto rows = convergence_table({{40, 2.5e-3}, {50, 1.6e-3}});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_FALSE(rows[0].order.has_value());
    ASSERT_TRUE(rows[1].order.has_value());
    EXPECT_NEAR(*rows[1].order, 2.00, 0.01);
}

TEST(ConvergenceTable, InverseMIsFirstOrder)
{
    std::vector<std::pair<int, double>> runs;
    for (int m : {40, 50, 60, 70, 80}) runs.emplace_back(m, 0.37 / m);
    const auto rows = convergence_table(runs);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(*rows[i].order, 1.0, 1e-12);
    EXPECT_NEAR(least_squares_order(rows), 1.0, 1e-12);
}

TEST(ConvergenceTable, TableTwoOrder)
{
    const auto rows = convergence_table({{40, 1.11e-2}, {50, 8.9e-3}});
    EXPECT_NEAR(*rows[1].order, 0.99, 0.005);
}

TEST(ConvergenceTable, ZeroErrorHasNoOrder)
{
    const auto rows = convergence_table({{10, 1e-3}, {20, 0.0}, {40, 0.0}});
    EXPECT_FALSE(rows[1].order.has_value());
    EXPECT_FALSE(rows[2].order.has_value());
    EXPECT_TRUE(std::isnan(least_squares_order(rows)));
}

TEST(ConvergenceTable, CsvFormat)
{
    std::ostringstream os;
    write_table_csv(os, "u_linf_l2", convergence_table({{40, 2.5e-3}, {50, 1.6e-3}}));
    EXPECT_EQ(os.str(), "m,u_linf_l2,order\n40,0.0025,\n50,0.0016,2\n");
}

TEST(ConvergenceTable, StandardTables)
{
    EXPECT_EQ(standard_tables().size(), 10u);
    EXPECT_EQ(find_table("v_discrete_linf_h1").field, Field::V);
    EXPECT_THROW((void)find_table("nope"), InvalidArgument);
}
