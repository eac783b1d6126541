#include "chemorep/scheme.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chemorep {

namespace {

constexpr double kZeroNorm = 1e-14;

Vector ones(int n)
{
    return Vector(static_cast<std::size_t>(n), 1.0);
}

Vector diff(std::span<const double> a, std::span<const double> b)
{
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

double mass_norm(const CsrMatrix& m, std::span<const double> x)
{
    return std::sqrt(std::max(0.0, m.bilinear(x, x)));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace

std::string to_string(Method m)
{
    return m == Method::Picard ? "picard" : "newton";
}

Method parse_method(const std::string& s)
{
    if (s == "picard") return Method::Picard;
    if (s == "newton") return Method::Newton;
    throw InvalidArgument(fmt::format("method: expected 'picard' or 'newton', got '{}'", s));
}

void SolverConfig::validate() const
{
    if (!(k > 0.0)) throw InvalidArgument(fmt::format("k: must be positive, got {}", k));
    if (!(T >= k)) throw InvalidArgument(fmt::format("T: must be at least k = {}, got {}", k, T));
    if (!(tol > 0.0)) throw InvalidArgument(fmt::format("tol: must be positive, got {}", tol));
    if (!(roundoff_floor >= 0.0))
        throw InvalidArgument(fmt::format("roundoff_floor: must be >= 0, got {}", roundoff_floor));
    if (max_nl_iter < 0) throw InvalidArgument(fmt::format("max_nl_iter: must be >= 0, got {}", max_nl_iter));
    if (!(linear_tol > 0.0)) throw InvalidArgument(fmt::format("linear_tol: must be positive, got {}", linear_tol));
    if (linear_max_iter < 1)
        throw InvalidArgument(fmt::format("linear_max_iter: must be positive, got {}", linear_max_iter));
    (void)num_steps();
}

int SolverConfig::max_iterations() const noexcept
{
    if (max_nl_iter > 0) return max_nl_iter;
    return method == Method::Picard ? 50 : 20;
}

int SolverConfig::num_steps() const
{
    const double n = T / k;
    const double r = std::round(n);
    if (r < 1.0 || std::abs(n - r) > 1e-9 * r)
        throw InvalidArgument(fmt::format("T/k = {} / {} = {} is not a positive integer", T, k, n));
    return static_cast<int>(r);
}

struct UsScheme::Rhs {
    double t{0.0};
    Vector f; ///< (f, u_bar), zero without forcing
    Vector g; ///< (g, s_bar), constrained entries zero
    Vector h; ///< (h, v_bar)
    bool has_f{false};
    bool has_g{false};
    bool has_h{false};
};

UsScheme::UsScheme(Spaces spaces, SolverConfig config, Forcing forcing)
    : spaces_(std::move(spaces)), config_(config), forcing_(std::move(forcing))
{
    config_.validate();
    CHEMOREP_REQUIRE(spaces_.u && spaces_.sigma && spaces_.v, "UsScheme: incomplete spaces");
    CHEMOREP_REQUIRE(!spaces_.u->is_vector() && spaces_.sigma->is_vector() && !spaces_.v->is_vector(),
                     "UsScheme: expected scalar U_h, vector Sigma_h, scalar V_h");
    const FeSpace& U = *spaces_.u;
    const FeSpace& S = *spaces_.sigma;
    const FeSpace& V = *spaces_.v;
    const int q = config_.quad_degree;
    const double k = config_.k;

    nu_ = U.n_dofs();
    ns_ = S.n_dofs();

    mu_ = assemble_bilinear(FormTag::Mass, U, U, {}, false, q);
    ku_ = assemble_bilinear(FormTag::Stiffness, U, U, {}, false, q);
    au_ = add(ku_, mu_);
    ms_ = assemble_bilinear(FormTag::Mass, S, S, {}, false, q);
    bs_ = assemble_bilinear(FormTag::BForm, S, S, {}, false, q);
    uu_base_ = add(mu_, ku_, 1.0 / k, 1.0);
    ss_base_ = add(ms_, bs_, 1.0 / k, 1.0);

    conv_u_sigma_ = U.sparsity_pattern(S);
    conv_gradu_ = S.sparsity_pattern(U);
    transport_ = U.sparsity_pattern(U);
    product_ = S.sparsity_pattern(U);

    mv_ = assemble_bilinear(FormTag::Mass, V, V, {}, false, q);
    const CsrMatrix av = assemble_bilinear(FormTag::AForm, V, V, {}, false, q);
    v_factor_.factorize(add(mv_, av, 1.0 / k, 1.0));

    mu_ones_ = mu_ * ones(nu_);
    mv_ones_ = mv_ * ones(V.n_dofs());

    for (int d : S.constrained_dofs()) block_constrained_.push_back(nu_ + d);

    if (config_.check_scheme_residual) {
        au_factor_.factorize(au_);
        CsrMatrix bc = bs_;
        constrain_symmetric(bc, S.constrained_dofs());
        bs_factor_.factorize(bc);
    }
}

UsScheme::~UsScheme() = default;
UsScheme::UsScheme(UsScheme&&) noexcept = default;
UsScheme& UsScheme::operator=(UsScheme&&) noexcept = default;

UsScheme::Rhs UsScheme::forcing_vectors(double t_n) const
{
    const int q = config_.quad_degree;
    Rhs r;
    r.t = t_n;
    if (forcing_.f) {
        r.f = assemble_source(*spaces_.u, [&](Point2 p) { return forcing_.f(p, t_n); }, q);
        r.has_f = true;
    } else {
        r.f.assign(static_cast<std::size_t>(nu_), 0.0);
    }
    if (forcing_.g) {
        r.g = assemble_vector_source(*spaces_.sigma, [&](Point2 p) { return forcing_.g(p, t_n); }, q);
        spaces_.sigma->apply_constraints(r.g);
        r.has_g = true;
    } else {
        r.g.assign(static_cast<std::size_t>(ns_), 0.0);
    }
    if (forcing_.h) {
        r.h = assemble_source(*spaces_.v, [&](Point2 p) { return forcing_.h(p, t_n); }, q);
        r.has_h = true;
    } else {
        r.h.assign(static_cast<std::size_t>(spaces_.v->n_dofs()), 0.0);
    }
    return r;
}

Vector UsScheme::solve_block(const CsrMatrix& a, std::span<const double> b)
{
    if (config_.linear_solver == LinearSolverKind::Krylov)
        return solve_general(a, b, config_.linear_tol, config_.linear_max_iter, true);
    lu_.factorize(a);
    return lu_.solve(b);
}

NonlinearResult UsScheme::iterate(const State& prev, const Rhs& rhs, Method method)
{
    CHEMOREP_REQUIRE(prev.u.size() == nu_ && prev.sigma.size() == ns_, "UsScheme: state does not match the spaces");
    const FeSpace& U = *spaces_.u;
    const FeSpace& S = *spaces_.sigma;
    const int q = config_.quad_degree;
    const double k = config_.k;
    const bool newton = method == Method::Newton;

    // time terms of the right-hand side, fixed over the iteration
    Vector b0(static_cast<std::size_t>(nu_ + ns_));
    {
        const Vector mu_prev = mu_ * prev.u.coefficients;
        const Vector ms_prev = ms_ * prev.sigma.coefficients;
        for (int i = 0; i < nu_; ++i) b0[i] = mu_prev[i] / k + rhs.f[i];
        for (int i = 0; i < ns_; ++i) b0[nu_ + i] = ms_prev[i] / k + rhs.g[i];
    }

    NonlinearResult res;
    res.u = prev.u;
    res.sigma = prev.sigma;
    const int max_iter = config_.max_iterations();

    for (int l = 1; l <= max_iter; ++l) {
        const FeFunction& w = res.u;
        assemble_bilinear_into(conv_u_sigma_, FormTag::ConvUSigma, U, S, {&w, nullptr}, q);
        assemble_bilinear_into(conv_gradu_, FormTag::ConvGradU, S, U, {&w, nullptr}, q);

        CsrMatrix uu;
        CsrMatrix su;
        Vector b = b0;
        if (newton) {
            assemble_bilinear_into(transport_, FormTag::TransportFrozenSigma, U, U, {nullptr, &res.sigma}, q);
            assemble_bilinear_into(product_, FormTag::ProductFrozenGradW, S, U, {&w, nullptr}, q);
            uu = add(uu_base_, transport_);
            su = add(conv_gradu_, product_, -1.0, -1.0);
            const Vector cs = conv_u_sigma_ * res.sigma.coefficients;
            const Vector cu = conv_gradu_ * res.u.coefficients;
            axpy(1.0, cs, std::span<double>(b.data(), static_cast<std::size_t>(nu_)));
            axpy(-1.0, cu, std::span<double>(b.data() + nu_, static_cast<std::size_t>(ns_)));
        } else {
            uu = uu_base_;
            su = conv_gradu_;
            su.scale(-1.0);
        }
        CsrMatrix block = block_matrix({{{&uu, &conv_u_sigma_}, {&su, &ss_base_}}}, {nu_, ns_}, {nu_, ns_});
        constrain_symmetric(block, block_constrained_);
        for (int d : block_constrained_) b[d] = 0.0;

        const Vector x = solve_block(block, b);

        Vector un(x.begin(), x.begin() + nu_);
        Vector sn(x.begin() + nu_, x.end());
        S.apply_constraints(sn);
        const Vector du = diff(un, res.u.coefficients);
        const Vector ds = diff(sn, res.sigma.coefficients);

        const double eu = mass_norm(mu_, du);
        const double es = mass_norm(ms_, ds);
        const double nu_prev = mass_norm(mu_, res.u.coefficients);
        const double ns_prev = mass_norm(ms_, res.sigma.coefficients);
        const double ru = nu_prev < kZeroNorm ? eu : eu / nu_prev;
        const double rs = ns_prev < kZeroNorm ? es : es / ns_prev;
        const double inc = std::max(ru, rs);

        res.increments.push_back(inc);
        res.increments_u.push_back(eu);
        res.increments_sigma.push_back(es);
        res.increments_h1.push_back(std::sqrt(std::max(0.0, au_.bilinear(du, du) + bs_.bilinear(ds, ds))));
        res.u.coefficients = std::move(un);
        res.sigma.coefficients = std::move(sn);
        res.iterations = l;

        if (!std::isfinite(inc)) break;
        const double floor = config_.roundoff_floor * (nu_prev + ns_prev);
        if (inc <= config_.tol || (eu <= floor && es <= floor)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

NonlinearResult UsScheme::picard_iterate(const State& prev)
{
    return iterate(prev, forcing_vectors((prev.n + 1) * config_.k), Method::Picard);
}

NonlinearResult UsScheme::newton_iterate(const State& prev)
{
    return iterate(prev, forcing_vectors((prev.n + 1) * config_.k), Method::Newton);
}

FeFunction UsScheme::recover_v(const FeFunction& prev_v, const FeFunction& u_n, const Vector& h)
{
    CHEMOREP_REQUIRE(prev_v.size() == spaces_.v->n_dofs(), "recover_v: v^{n-1} does not match V_h");
    Vector b = mv_ * prev_v.coefficients;
    const Vector u2 = assemble_u_squared(*spaces_.v, u_n, config_.quad_degree);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = b[i] / config_.k + u2[i] + h[i];
    return FeFunction(spaces_.v, v_factor_.solve(b));
}

FeFunction UsScheme::recover_v(const FeFunction& prev_v, const FeFunction& u_n, double t_n)
{
    return recover_v(prev_v, u_n, forcing_vectors(t_n).h);
}

double UsScheme::scheme_residual(const State& prev, const FeFunction& u, const FeFunction& sigma, const Rhs& rhs)
{
    CHEMOREP_REQUIRE(config_.check_scheme_residual, "scheme_residual: disabled in the solver configuration");
    const FeSpace& U = *spaces_.u;
    const FeSpace& S = *spaces_.sigma;
    const int q = config_.quad_degree;
    const double k = config_.k;
    assemble_bilinear_into(conv_u_sigma_, FormTag::ConvUSigma, U, S, {&u, nullptr}, q);
    assemble_bilinear_into(conv_gradu_, FormTag::ConvGradU, S, U, {&u, nullptr}, q);

    const Vector du = diff(u.coefficients, prev.u.coefficients);
    const Vector ds = diff(sigma.coefficients, prev.sigma.coefficients);
    Vector ru = mu_ * du;
    const Vector ku = ku_ * u.coefficients;
    const Vector cs = conv_u_sigma_ * sigma.coefficients;
    for (int i = 0; i < nu_; ++i) ru[i] = ru[i] / k + ku[i] + cs[i] - rhs.f[i];
    Vector rs = ms_ * ds;
    const Vector bsig = bs_ * sigma.coefficients;
    const Vector cu = conv_gradu_ * u.coefficients;
    for (int i = 0; i < ns_; ++i) rs[i] = rs[i] / k + bsig[i] - cu[i] - rhs.g[i];
    S.apply_constraints(rs);

    const Vector zu = au_factor_.solve(ru);
    const Vector zs = bs_factor_.solve(rs);
    return std::sqrt(std::max(0.0, dot(ru, zu) + dot(rs, zs)));
}

double UsScheme::scheme_residual(const State& prev, const FeFunction& u, const FeFunction& sigma)
{
    return scheme_residual(prev, u, sigma, forcing_vectors((prev.n + 1) * config_.k));
}

double UsScheme::energy(const State& s) const
{
    return 0.5 * mu_.bilinear(s.u.coefficients, s.u.coefficients) +
           0.25 * ms_.bilinear(s.sigma.coefficients, s.sigma.coefficients);
}

double UsScheme::mass(const FeFunction& u) const
{
    return dot(mu_ones_, u.coefficients);
}

StepReport UsScheme::make_report(const State& prev, const State& next, const Rhs& rhs, const NonlinearResult& nl)
{
    const double k = config_.k;
    StepReport r;
    r.n = next.n;
    r.t = next.t;
    r.iterations = nl.iterations;
    r.increments = nl.increments;
    r.increments_h1 = nl.increments_h1;

    const auto& u = next.u.coefficients;
    const auto& s = next.sigma.coefficients;
    const Vector du = diff(u, prev.u.coefficients);
    const Vector ds = diff(s, prev.sigma.coefficients);
    const double e_prev = energy(prev);
    r.energy = energy(next);
    const double grad_u = ku_.bilinear(u, u);
    const double b_sigma = bs_.bilinear(s, s);
    r.dissipation = 0.5 * mu_.bilinear(du, du) / k + 0.25 * ms_.bilinear(ds, ds) / k + grad_u + 0.5 * b_sigma;
    r.forcing_work = dot(rhs.f, u) + 0.5 * dot(rhs.g, s);
    r.energy_law_residual = (r.energy - e_prev) / k + r.dissipation - r.forcing_work;

    r.mass = mass(next.u);
    const double v_prev = dot(mv_ones_, prev.v.coefficients);
    r.v_mass = dot(mv_ones_, next.v.coefficients);
    const Vector u2 = assemble_u_squared(*spaces_.v, next.u, config_.quad_degree);
    const double int_u2 = std::accumulate(u2.begin(), u2.end(), 0.0);
    const double int_h = std::accumulate(rhs.h.begin(), rhs.h.end(), 0.0);
    r.v_mass_balance_residual = (r.v_mass - v_prev) / k - int_u2 + r.v_mass - int_h;
    r.v_mass_balance_scale = std::abs(r.v_mass - v_prev) / k + std::abs(int_u2) + std::abs(r.v_mass) + std::abs(int_h);

    if (config_.check_scheme_residual) r.scheme_residual = scheme_residual(prev, next.u, next.sigma, rhs);

    const double norm_u1 = std::sqrt(grad_u + r.mass * r.mass);
    const double norm_s1 = std::sqrt(b_sigma);
    r.uniqueness_indicator = k * std::pow(norm_u1 + norm_s1, 4);
    r.uniqueness_warning = r.uniqueness_indicator > config_.uniqueness_threshold;
    return r;
}

std::pair<State, StepReport> UsScheme::step(const State& prev)
{
    const double t_n = (prev.n + 1) * config_.k;
    const Rhs rhs = forcing_vectors(t_n);
    NonlinearResult nl = iterate(prev, rhs, config_.method);
    if (!nl.converged) {
        throw NonlinearSolveError(fmt::format("{} iteration did not converge at step {} (t = {}) after {} "
                                              "iterations, last increment {:.3e}",
                                              to_string(config_.method), prev.n + 1, t_n, nl.iterations,
                                              nl.increments.empty() ? 0.0 : nl.increments.back()),
                                  nl.increments);
    }
    State next;
    next.n = prev.n + 1;
    next.t = t_n;
    next.u = std::move(nl.u);
    next.sigma = std::move(nl.sigma);
    next.v = recover_v(prev.v, next.u, rhs.h);
    StepReport report = make_report(prev, next, rhs, nl);
    return {std::move(next), std::move(report)};
}

RunResult UsScheme::run(const State& initial, int snapshot_stride,
                        const std::function<void(const State&, const StepReport&)>& on_step)
{
    CHEMOREP_REQUIRE(snapshot_stride >= 0, "run: snapshot stride must be >= 0");
    const int n_steps = config_.num_steps();
    RunResult result;
    result.reports.reserve(static_cast<std::size_t>(n_steps));
    State current = initial;
    for (int i = 0; i < n_steps; ++i) {
        auto [next, report] = step(current);
        if (on_step) on_step(next, report);
        result.reports.push_back(std::move(report));
        current = std::move(next);
        if (snapshot_stride > 0 && current.n % snapshot_stride == 0 && i + 1 < n_steps)
            result.snapshots.push_back(current);
    }
    result.snapshots.push_back(current);
    result.final_state = std::move(current);
    return result;
}

} // namespace chemorep
