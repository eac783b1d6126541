#include "chemorep/mms.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

namespace chemorep {

namespace {

constexpr double kA = 2.0 * std::numbers::pi;

struct Phi {
    double c;  // cos(ax) cos(ay)
    double sx; // sin(ax) cos(ay)
    double sy; // cos(ax) sin(ay)
    double ss; // sin(ax) sin(ay)
};

Phi phi_parts(Point2 p)
{
    const double cx = std::cos(kA * p.x);
    const double cy = std::cos(kA * p.y);
    const double sx = std::sin(kA * p.x);
    const double sy = std::sin(kA * p.y);
    return {cx * cy, sx * cy, cx * sy, sx * sy};
}

double phi(Point2 p)
{
    return phi_parts(p).c + 2.0;
}

Vec2 grad_phi(Point2 p)
{
    const Phi q = phi_parts(p);
    return {-kA * q.sx, -kA * q.sy};
}

Mat2 hess_phi(Point2 p)
{
    const Phi q = phi_parts(p);
    const double a2 = kA * kA;
    Mat2 h;
    h(0, 0) = -a2 * q.c;
    h(0, 1) = a2 * q.ss;
    h(1, 0) = a2 * q.ss;
    h(1, 1) = -a2 * q.c;
    return h;
}

double lap_phi(Point2 p)
{
    return -2.0 * kA * kA * phi_parts(p).c;
}

} // namespace

ScalarField ExactSolution::u_field(double t) const
{
    return {[this, t](Point2 p) { return u(p, t); }, [this, t](Point2 p) { return grad_u(p, t); }};
}

VectorField ExactSolution::sigma_field(double t) const
{
    return {[this, t](Point2 p) { return sigma(p, t); }, [this, t](Point2 p) { return grad_sigma(p, t); }};
}

ScalarField ExactSolution::v_field(double t) const
{
    return {[this, t](Point2 p) { return v(p, t); }, [this, t](Point2 p) { return grad_v(p, t); }};
}

InitialData ExactSolution::initial_data(double t) const
{
    return {u_field(t), sigma_field(t), v_field(t)};
}

double ManufacturedSolution::u(Point2 p, double t) const { return std::exp(-t) * phi(p); }
Vec2 ManufacturedSolution::grad_u(Point2 p, double t) const { return std::exp(-t) * grad_phi(p); }
double ManufacturedSolution::laplacian_u(Point2 p, double t) const { return std::exp(-t) * lap_phi(p); }
double ManufacturedSolution::u_t(Point2 p, double t) const { return -std::exp(-t) * phi(p); }

double ManufacturedSolution::v(Point2 p, double t) const { return (1.0 + std::sin(t)) * phi(p); }
Vec2 ManufacturedSolution::grad_v(Point2 p, double t) const { return (1.0 + std::sin(t)) * grad_phi(p); }
double ManufacturedSolution::laplacian_v(Point2 p, double t) const { return (1.0 + std::sin(t)) * lap_phi(p); }
double ManufacturedSolution::v_t(Point2 p, double t) const { return std::cos(t) * phi(p); }

Vec2 ManufacturedSolution::sigma(Point2 p, double t) const { return grad_v(p, t); }

Mat2 ManufacturedSolution::grad_sigma(Point2 p, double t) const
{
    Mat2 h = hess_phi(p);
    const double s = 1.0 + std::sin(t);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) h(i, j) *= s;
    return h;
}

Vec2 ManufacturedSolution::sigma_t(Point2 p, double t) const { return std::cos(t) * grad_phi(p); }

Vec2 ManufacturedSolution::grad_div_sigma(Point2 p, double t) const
{
    // div sigma = (1 + sin t) lap phi = -2 a^2 (1 + sin t) (phi - 2)
    return (-2.0 * kA * kA * (1.0 + std::sin(t))) * grad_phi(p);
}

Forcing forcing_terms(std::shared_ptr<const ExactSolution> exact)
{
    CHEMOREP_REQUIRE(exact != nullptr, "forcing_terms: null exact solution");
    Forcing f;
    f.f = [exact](Point2 p, double t) {
        const Mat2 js = exact->grad_sigma(p, t);
        const double div_u_sigma = dot(exact->grad_u(p, t), exact->sigma(p, t)) + exact->u(p, t) * divergence(js);
        return exact->u_t(p, t) - exact->laplacian_u(p, t) - div_u_sigma;
    };
    f.g = [exact](Point2 p, double t) {
        return exact->sigma_t(p, t) + exact->curl_rot_sigma(p, t) - exact->grad_div_sigma(p, t) + exact->sigma(p, t) -
               (2.0 * exact->u(p, t)) * exact->grad_u(p, t);
    };
    f.h = [exact](Point2 p, double t) {
        const double u = exact->u(p, t);
        return exact->v_t(p, t) - exact->laplacian_v(p, t) + exact->v(p, t) - u * u;
    };
    return f;
}

double StepErrors::value(Field f, ErrorKind kind, SpatialNorm norm) const
{
    const FieldErrors& fe = f == Field::U ? u : (f == Field::Sigma ? sigma : v);
    const NormSet& ns = kind == ErrorKind::Total ? fe.total : fe.discrete;
    return norm == SpatialNorm::L2 ? ns.l2 : ns.h1;
}

StepErrors compute_errors(const State& state, const ExactSolution& exact, const Projectors& projectors, int quad_degree)
{
    StepErrors e;
    e.n = state.n;
    e.t = state.t;
    const ScalarField u = exact.u_field(state.t);
    const VectorField s = exact.sigma_field(state.t);
    const ScalarField v = exact.v_field(state.t);
    e.u.total = error_norms(state.u, u, quad_degree);
    e.sigma.total = error_norms(state.sigma, s, quad_degree);
    e.v.total = error_norms(state.v, v, quad_degree);
    e.u.discrete = difference_norms(ritz_project(projectors.u, u), state.u, quad_degree);
    e.sigma.discrete = difference_norms(ritz_project(projectors.sigma, s), state.sigma, quad_degree);
    e.v.discrete = difference_norms(ritz_project(projectors.v, v), state.v, quad_degree);
    return e;
}

ErrorAccumulator::ErrorAccumulator(double k, AggregationOptions options) : k_(k), options_(options)
{
    CHEMOREP_REQUIRE(k > 0.0, "ErrorAccumulator: k must be positive");
}

int ErrorAccumulator::index(Field f, ErrorKind kind, SpatialNorm norm)
{
    return static_cast<int>(f) * 4 + static_cast<int>(kind) * 2 + static_cast<int>(norm);
}

void ErrorAccumulator::record(const StepErrors& e)
{
    records_.push_back(e);
    const bool in_max = e.n > 0 || options_.max_includes_initial;
    const bool in_l2 = e.n > 0 || options_.l2_includes_initial;
    for (Field f : {Field::U, Field::Sigma, Field::V})
        for (ErrorKind kind : {ErrorKind::Total, ErrorKind::Discrete})
            for (SpatialNorm norm : {SpatialNorm::L2, SpatialNorm::H1}) {
                const int i = index(f, kind, norm);
                const double x = e.value(f, kind, norm);
                if (in_max) max_[i] = std::max(max_[i], x);
                if (in_l2) sum_sq_[i] += x * x;
            }
}

double ErrorAccumulator::aggregate(Field f, ErrorKind kind, SpatialNorm norm, TimeNorm time) const
{
    const int i = index(f, kind, norm);
    return time == TimeNorm::Max ? max_[i] : std::sqrt(k_ * sum_sq_[i]);
}

void record_step(ErrorAccumulator& acc, const State& state, const ExactSolution& exact, const Projectors& projectors)
{
    acc.record(compute_errors(state, exact, projectors));
}

const std::vector<TableSpec>& standard_tables()
{
    static const std::vector<TableSpec> tables{
        {"u_linf_l2", Field::U, ErrorKind::Total, TimeNorm::Max, SpatialNorm::L2},
        {"u_discrete_linf_l2", Field::U, ErrorKind::Discrete, TimeNorm::Max, SpatialNorm::L2},
        {"u_l2_h1", Field::U, ErrorKind::Total, TimeNorm::L2, SpatialNorm::H1},
        {"u_discrete_l2_h1", Field::U, ErrorKind::Discrete, TimeNorm::L2, SpatialNorm::H1},
        {"v_linf_h1", Field::V, ErrorKind::Total, TimeNorm::Max, SpatialNorm::H1},
        {"v_discrete_linf_h1", Field::V, ErrorKind::Discrete, TimeNorm::Max, SpatialNorm::H1},
        {"sigma_linf_l2", Field::Sigma, ErrorKind::Total, TimeNorm::Max, SpatialNorm::L2},
        {"sigma_discrete_linf_l2", Field::Sigma, ErrorKind::Discrete, TimeNorm::Max, SpatialNorm::L2},
        {"sigma_l2_h1", Field::Sigma, ErrorKind::Total, TimeNorm::L2, SpatialNorm::H1},
        {"sigma_discrete_l2_h1", Field::Sigma, ErrorKind::Discrete, TimeNorm::L2, SpatialNorm::H1},
    };
    return tables;
}

const TableSpec& find_table(const std::string& name)
{
    for (const auto& t : standard_tables())
        if (t.name == name) return t;
    throw InvalidArgument(fmt::format("unknown table '{}'", name));
}

std::vector<TableRow> convergence_table(const std::vector<std::pair<int, double>>& runs)
{
    std::vector<TableRow> rows;
    rows.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto [m, e] = runs[i];
        CHEMOREP_REQUIRE(m > 0, "convergence_table: m must be positive");
        TableRow r{m, e, std::nullopt};
        if (i > 0) {
            const auto [mc, ec] = runs[i - 1];
            CHEMOREP_REQUIRE(mc != m, "convergence_table: repeated m");
            if (e > 0.0 && ec > 0.0) r.order = std::log(ec / e) / std::log(static_cast<double>(m) / mc);
        }
        rows.push_back(r);
    }
    return rows;
}

double least_squares_order(const std::vector<TableRow>& rows)
{
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    int n = 0;
    for (const auto& r : rows) {
        if (!(r.error > 0.0)) continue;
        const double x = std::log(static_cast<double>(r.m));
        const double y = -std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / den;
}

void write_table_csv(std::ostream& os, const std::string& norm_name, const std::vector<TableRow>& rows)
{
    os << "m," << norm_name << ",order\n";
    for (const auto& r : rows) {
        os << r.m << ',' << fmt::format("{:.6g}", r.error) << ',';
        if (r.order) os << fmt::format("{:.6g}", *r.order);
        os << '\n';
    }
}

void write_table_csv(const std::string& path, const std::string& norm_name, const std::vector<TableRow>& rows)
{
    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path));
    write_table_csv(os, norm_name, rows);
    if (!os) throw IoError(fmt::format("failed writing '{}'", path));
}

MmsResult run_mms(const MmsOptions& options, std::shared_ptr<const ExactSolution> exact,
                  const std::function<void(const State&, const StepReport&)>& on_step)
{
    CHEMOREP_REQUIRE(exact != nullptr, "run_mms: null exact solution");
    auto mesh = std::make_shared<const Mesh>(unit_square_mesh(options.m));
    const Spaces spaces = make_spaces(mesh);
    const Projectors projectors(spaces);

    MmsResult result;
    result.m = options.m;
    result.h = mesh->h_max();
    result.errors = ErrorAccumulator(options.solver.k, options.aggregation);

    State initial = initialize_state(projectors, exact->initial_data(0.0));
    record_step(result.errors, initial, *exact, projectors);

    UsScheme scheme(spaces, options.solver, forcing_terms(exact));
    result.run = scheme.run(initial, options.snapshot_stride, [&](const State& s, const StepReport& r) {
        record_step(result.errors, s, *exact, projectors);
        if (on_step) on_step(s, r);
    });
    return result;
}

} // namespace chemorep
