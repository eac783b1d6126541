#pragma once

#include "chemorep/assembly.hpp"
#include "chemorep/solvers.hpp"
#include "chemorep/state.hpp"

#include <functional>
#include <string>
#include <vector>

namespace chemorep {

enum class Method { Picard, Newton };
enum class LinearSolverKind { Direct, Krylov };

[[nodiscard]] std::string to_string(Method m);
/// "picard" or "newton"; anything else throws InvalidArgument.
[[nodiscard]] Method parse_method(const std::string& s);

struct SolverConfig {
    double k{1e-5};
    double T{1e-3};
    Method method{Method::Newton};
    double tol{1e-6};
    int max_nl_iter{0}; ///< 0 selects 50 for Picard, 20 for Newton
    /// Also stop once both absolute increments are below roundoff_floor * (||u||_0 + ||sigma||_0).
    /// The relative test alone cannot be met when sigma decays to roundoff size.
    double roundoff_floor{1e-12};
    LinearSolverKind linear_solver{LinearSolverKind::Direct};
    double linear_tol{1e-10};
    int linear_max_iter{10000};
    double uniqueness_threshold{100.0};
    bool check_scheme_residual{true};
    int quad_degree{kDefaultQuadratureDegree};

    /// Throws InvalidArgument naming the offending field.
    void validate() const;
    [[nodiscard]] int max_iterations() const noexcept;
    /// T / k, which must be integral to 1e-9 relative.
    [[nodiscard]] int num_steps() const;
};

/// Right-hand sides of the u, sigma and v equations. Empty members mean zero.
struct Forcing {
    std::function<double(Point2, double)> f;
    std::function<Vec2(Point2, double)> g;
    std::function<double(Point2, double)> h;
};

struct NonlinearResult {
    FeFunction u;
    FeFunction sigma;
    int iterations{0};
    bool converged{false};
    std::vector<double> increments;          ///< stopping quantity per iteration
    std::vector<double> increments_u;        ///< ||u^l - u^{l-1}||_0
    std::vector<double> increments_sigma;    ///< ||sigma^l - sigma^{l-1}||_0
    std::vector<double> increments_h1;       ///< (e_u' A e_u + e_s' B e_s)^{1/2}
};

struct StepReport {
    int n{0};
    double t{0.0};
    int iterations{0};
    std::vector<double> increments;
    std::vector<double> increments_h1;
    double energy{0.0};
    /// dE + (k/2)||d u||^2 + (k/4)||d sigma||^2 + ||grad u||^2 + (1/2) sigma' B sigma - forcing_work
    double energy_law_residual{0.0};
    double dissipation{0.0};
    double forcing_work{0.0}; ///< (f, u) + (1/2)(g, sigma)
    double mass{0.0};
    double v_mass{0.0};
    double v_mass_balance_residual{0.0}; ///< d int v - int u^2 + int v - int h
    double v_mass_balance_scale{0.0};
    double scheme_residual{-1.0}; ///< dual norm of the nonlinear residual, -1 when not checked
    double uniqueness_indicator{0.0}; ///< k (||u||_1 + ||sigma||_1)^4
    bool uniqueness_warning{false};
};

struct RunResult {
    State final_state;
    std::vector<StepReport> reports;
    std::vector<State> snapshots;
};

/// Backward Euler scheme in (u, sigma) with the v recovery step.
///
/// The (u, sigma) block is solved monolithically; sigma . n = 0 enters as identity rows. All
/// time-independent matrices and factorizations are built once at construction. Not thread-safe;
/// independent runs need independent instances.
class UsScheme {
public:
    UsScheme(Spaces spaces, SolverConfig config, Forcing forcing = {});
    ~UsScheme();
    UsScheme(UsScheme&&) noexcept;
    UsScheme& operator=(UsScheme&&) noexcept;

    [[nodiscard]] const Spaces& spaces() const noexcept { return spaces_; }
    [[nodiscard]] const SolverConfig& config() const noexcept { return config_; }

    /// Iterates from (u^{n-1}, sigma^{n-1}) towards (u^n, sigma^n) at t_n = prev.t + k. Does
    /// not throw on non-convergence; inspect `converged`.
    [[nodiscard]] NonlinearResult picard_iterate(const State& prev);
    [[nodiscard]] NonlinearResult newton_iterate(const State& prev);

    /// v^n from v^{n-1} and u^n, with h evaluated at t_n.
    [[nodiscard]] FeFunction recover_v(const FeFunction& prev_v, const FeFunction& u_n, double t_n);

    /// One full step. Throws NonlinearSolveError if the nonlinear method does not converge.
    [[nodiscard]] std::pair<State, StepReport> step(const State& prev);

    /// T / k steps. Snapshots every `snapshot_stride` steps (0 = none) plus the final state.
    [[nodiscard]] RunResult run(const State& initial, int snapshot_stride = 0,
                                const std::function<void(const State&, const StepReport&)>& on_step = {});

    /// Dual norm, in the A x B norm, of the nonlinear residual at (u, sigma) given prev.
    [[nodiscard]] double scheme_residual(const State& prev, const FeFunction& u, const FeFunction& sigma);

    [[nodiscard]] double energy(const State& s) const;
    [[nodiscard]] double mass(const FeFunction& u) const;

private:
    struct Rhs;
    [[nodiscard]] Rhs forcing_vectors(double t_n) const;
    [[nodiscard]] NonlinearResult iterate(const State& prev, const Rhs& rhs, Method method);
    [[nodiscard]] FeFunction recover_v(const FeFunction& prev_v, const FeFunction& u_n, const Vector& h);
    [[nodiscard]] Vector solve_block(const CsrMatrix& a, std::span<const double> b);
    [[nodiscard]] double scheme_residual(const State& prev, const FeFunction& u, const FeFunction& sigma,
                                         const Rhs& rhs);
    [[nodiscard]] StepReport make_report(const State& prev, const State& next, const Rhs& rhs,
                                         const NonlinearResult& nl);

    Spaces spaces_;
    SolverConfig config_;
    Forcing forcing_;

    int nu_{0};
    int ns_{0};
    CsrMatrix mu_, ku_, au_;
    CsrMatrix ms_, bs_;
    CsrMatrix uu_base_, ss_base_;
    CsrMatrix conv_u_sigma_, conv_gradu_, transport_, product_;
    CsrMatrix mv_;
    Vector mu_ones_, mv_ones_;
    std::vector<int> block_constrained_;
    SparseLu lu_;
    SpdFactorization v_factor_;
    SpdFactorization au_factor_;
    SpdFactorization bs_factor_;
};

} // namespace chemorep
