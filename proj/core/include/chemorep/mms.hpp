#pragma once

#include "chemorep/norms.hpp"
#include "chemorep/projections.hpp"
#include "chemorep/scheme.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chemorep {

/// Closed-form exact solution (u, v, sigma = grad v) with the derivatives the forcing needs.
class ExactSolution {
public:
    virtual ~ExactSolution() = default;

    [[nodiscard]] virtual double u(Point2 p, double t) const = 0;
    [[nodiscard]] virtual Vec2 grad_u(Point2 p, double t) const = 0;
    [[nodiscard]] virtual double laplacian_u(Point2 p, double t) const = 0;
    [[nodiscard]] virtual double u_t(Point2 p, double t) const = 0;

    [[nodiscard]] virtual double v(Point2 p, double t) const = 0;
    [[nodiscard]] virtual Vec2 grad_v(Point2 p, double t) const = 0;
    [[nodiscard]] virtual double laplacian_v(Point2 p, double t) const = 0;
    [[nodiscard]] virtual double v_t(Point2 p, double t) const = 0;

    [[nodiscard]] virtual Vec2 sigma(Point2 p, double t) const = 0;
    /// (i, j) = d sigma_i / d x_j
    [[nodiscard]] virtual Mat2 grad_sigma(Point2 p, double t) const = 0;
    [[nodiscard]] virtual Vec2 sigma_t(Point2 p, double t) const = 0;
    [[nodiscard]] virtual Vec2 grad_div_sigma(Point2 p, double t) const = 0;
    /// (d_y rot sigma, -d_x rot sigma); zero for gradient fields.
    [[nodiscard]] virtual Vec2 curl_rot_sigma(Point2, double) const { return {}; }

    [[nodiscard]] ScalarField u_field(double t) const;
    [[nodiscard]] VectorField sigma_field(double t) const;
    [[nodiscard]] ScalarField v_field(double t) const;
    [[nodiscard]] InitialData initial_data(double t = 0.0) const;
};

/// u = e^{-t} phi, v = (1 + sin t) phi, sigma = grad v, with phi = cos(2 pi x) cos(2 pi y) + 2.
class ManufacturedSolution final : public ExactSolution {
public:
    [[nodiscard]] double u(Point2 p, double t) const override;
    [[nodiscard]] Vec2 grad_u(Point2 p, double t) const override;
    [[nodiscard]] double laplacian_u(Point2 p, double t) const override;
    [[nodiscard]] double u_t(Point2 p, double t) const override;
    [[nodiscard]] double v(Point2 p, double t) const override;
    [[nodiscard]] Vec2 grad_v(Point2 p, double t) const override;
    [[nodiscard]] double laplacian_v(Point2 p, double t) const override;
    [[nodiscard]] double v_t(Point2 p, double t) const override;
    [[nodiscard]] Vec2 sigma(Point2 p, double t) const override;
    [[nodiscard]] Mat2 grad_sigma(Point2 p, double t) const override;
    [[nodiscard]] Vec2 sigma_t(Point2 p, double t) const override;
    [[nodiscard]] Vec2 grad_div_sigma(Point2 p, double t) const override;
};

/// u = c, v = c^2, sigma = 0: a stationary solution with zero forcing.
class ConstantSolution final : public ExactSolution {
public:
    explicit ConstantSolution(double c) : c_(c) {}
    [[nodiscard]] double u(Point2, double) const override { return c_; }
    [[nodiscard]] Vec2 grad_u(Point2, double) const override { return {}; }
    [[nodiscard]] double laplacian_u(Point2, double) const override { return 0.0; }
    [[nodiscard]] double u_t(Point2, double) const override { return 0.0; }
    [[nodiscard]] double v(Point2, double) const override { return c_ * c_; }
    [[nodiscard]] Vec2 grad_v(Point2, double) const override { return {}; }
    [[nodiscard]] double laplacian_v(Point2, double) const override { return 0.0; }
    [[nodiscard]] double v_t(Point2, double) const override { return 0.0; }
    [[nodiscard]] Vec2 sigma(Point2, double) const override { return {}; }
    [[nodiscard]] Mat2 grad_sigma(Point2, double) const override { return {}; }
    [[nodiscard]] Vec2 sigma_t(Point2, double) const override { return {}; }
    [[nodiscard]] Vec2 grad_div_sigma(Point2, double) const override { return {}; }

private:
    double c_;
};

/// f = u_t - lap u - div(u sigma)
/// g = sigma_t + curl rot sigma - grad div sigma + sigma - 2 u grad u
/// h = v_t - lap v + v - u^2
[[nodiscard]] Forcing forcing_terms(std::shared_ptr<const ExactSolution> exact);

enum class Field { U, Sigma, V };
enum class ErrorKind {
    Total,    ///< exact(t_n) - x_h^n
    Discrete, ///< R_h exact(t_n) - x_h^n
};
enum class SpatialNorm { L2, H1 };
enum class TimeNorm {
    Max, ///< max over recorded steps
    L2,  ///< (k sum ||e^n||^2)^{1/2}
};

struct FieldErrors {
    NormSet total;
    NormSet discrete;
};

struct StepErrors {
    int n{0};
    double t{0.0};
    FieldErrors u;
    FieldErrors sigma;
    FieldErrors v;

    [[nodiscard]] double value(Field f, ErrorKind kind, SpatialNorm norm) const;
};

[[nodiscard]] StepErrors compute_errors(const State& state, const ExactSolution& exact, const Projectors& projectors,
                                        int quad_degree = kDefaultQuadratureDegree);

struct AggregationOptions {
    bool l2_includes_initial{false};  ///< include n = 0 in the l2 time sum
    bool max_includes_initial{true};  ///< include n = 0 in the max
};

/// Per-step error records with running time aggregates.
class ErrorAccumulator {
public:
    explicit ErrorAccumulator(double k, AggregationOptions options = {});

    void record(const StepErrors& e);
    [[nodiscard]] const std::vector<StepErrors>& records() const noexcept { return records_; }
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] const AggregationOptions& options() const noexcept { return options_; }

    [[nodiscard]] double aggregate(Field f, ErrorKind kind, SpatialNorm norm, TimeNorm time) const;

private:
    static int index(Field f, ErrorKind kind, SpatialNorm norm);

    double k_;
    AggregationOptions options_;
    std::vector<StepErrors> records_;
    std::array<double, 12> max_{};
    std::array<double, 12> sum_sq_{};
};

void record_step(ErrorAccumulator& acc, const State& state, const ExactSolution& exact, const Projectors& projectors);

/// One tabulated norm.
struct TableSpec {
    std::string name;
    Field field;
    ErrorKind kind;
    TimeNorm time;
    SpatialNorm space;
};

/// u_linf_l2, u_discrete_linf_l2, u_l2_h1, u_discrete_l2_h1, v_linf_h1, v_discrete_linf_h1,
/// sigma_linf_l2, sigma_discrete_linf_l2, sigma_l2_h1, sigma_discrete_l2_h1.
[[nodiscard]] const std::vector<TableSpec>& standard_tables();
[[nodiscard]] const TableSpec& find_table(const std::string& name);

struct TableRow {
    int m{0};
    double error{0.0};
    std::optional<double> order; ///< empty on the first row and next to zero errors
};

/// Rows sorted as given; order = log(e_c / e_f) / log(m_f / m_c) between consecutive rows.
[[nodiscard]] std::vector<TableRow> convergence_table(const std::vector<std::pair<int, double>>& runs);

/// Least-squares slope of -log(error) against log(m) over rows with positive error; NaN with
/// fewer than two such rows.
[[nodiscard]] double least_squares_order(const std::vector<TableRow>& rows);

/// Header `m,<norm_name>,order`, values with 6 significant digits, empty order cells allowed.
void write_table_csv(std::ostream& os, const std::string& norm_name, const std::vector<TableRow>& rows);
void write_table_csv(const std::string& path, const std::string& norm_name, const std::vector<TableRow>& rows);

struct MmsOptions {
    int m{40};
    SolverConfig solver;
    AggregationOptions aggregation;
    int snapshot_stride{0};
};

struct MmsResult {
    int m{0};
    double h{0.0};
    ErrorAccumulator errors{1.0};
    RunResult run;
};

/// Runs the scheme with forcing from `exact` on the uniform m x m mesh, starting from the Ritz
/// projections of the exact fields at t = 0, and records errors at every step.
[[nodiscard]] MmsResult run_mms(const MmsOptions& options, std::shared_ptr<const ExactSolution> exact,
                                const std::function<void(const State&, const StepReport&)>& on_step = {});

} // namespace chemorep
