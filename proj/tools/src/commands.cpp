#include "chemorep/cli/commands.hpp"

#include "chemorep/cli/vtk.hpp"
#include "chemorep/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace chemorep::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    return os;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

void warn_uniqueness(const StepReport& r, double threshold, bool& warned, std::ostream& log)
{
    if (!r.uniqueness_warning || warned) return;
    warned = true;
    fmt::print(log, "warning: step {}: k (||u||_1 + ||sigma||_1)^4 = {:.3g} exceeds {:.3g}; uniqueness of the "
                    "discrete solution is not guaranteed\n",
               r.n, r.uniqueness_indicator, threshold);
}

void write_tables(const RunConfig& config, const std::vector<MmsResult>& runs, std::ostream& log)
{
    if (runs.empty()) return;
    for (const auto& spec : standard_tables()) {
        std::vector<std::pair<int, double>> data;
        for (const auto& r : runs) data.emplace_back(r.m, r.errors.aggregate(spec.field, spec.kind, spec.space, spec.time));
        const auto rows = convergence_table(data);
        write_table_csv((config.out_dir / (spec.name + ".csv")).string(), spec.name, rows);
        const double order = least_squares_order(rows);
        if (std::isnan(order))
            fmt::print(log, "{}: least-squares order n/a\n", spec.name);
        else
            fmt::print(log, "{}: least-squares order {:.4f}\n", spec.name, order);
    }
}

} // namespace

int cmd_run(const RunConfig& config, std::ostream& log)
{
    ensure_dir(config.out_dir);
    const int m = config.meshes.front();
    MmsOptions options;
    options.m = m;
    options.solver = config.solver;
    options.aggregation = config.aggregation;
    options.snapshot_stride = config.snapshot_stride;

    auto csv = open_output(config.out_dir / fmt::format("run_m{}.csv", m));
    csv << "n,t,iters,energy,energy_law_residual,mass,v_mass_balance_residual,scheme_residual\n";
    bool warned = false;
    const auto exact = std::make_shared<const ManufacturedSolution>();
    MmsResult result;
    try {
        result = run_mms(options, exact, [&](const State&, const StepReport& r) {
            csv << fmt::format("{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.n, r.t, r.iterations,
                               r.energy, r.energy_law_residual, r.mass, r.v_mass_balance_residual, r.scheme_residual);
            warn_uniqueness(r, config.solver.uniqueness_threshold, warned, log);
        });
    } catch (const NonlinearSolveError& e) {
        fmt::print(log, "error: {}\n", e.what());
        return 1;
    }
    for (const auto& s : result.run.snapshots) write_vtk(s, config.out_dir / fmt::format("state_{:06d}.vtk", s.n));

    fmt::print(log, "m = {}, {} steps, h = {:.6g}\n", m, result.run.reports.size(), result.h);
    for (const auto& spec : standard_tables())
        fmt::print(log, "{}: {:.6e}\n", spec.name,
                   result.errors.aggregate(spec.field, spec.kind, spec.space, spec.time));
    return 0;
}

int cmd_converge(const RunConfig& config, std::ostream& log)
{
    ensure_dir(config.out_dir);
    const auto exact = std::make_shared<const ManufacturedSolution>();
    std::vector<MmsResult> runs;
    for (int m : config.meshes) {
        MmsOptions options;
        options.m = m;
        options.solver = config.solver;
        options.aggregation = config.aggregation;
        bool warned = false;
        try {
            runs.push_back(run_mms(options, exact, [&](const State&, const StepReport& r) {
                warn_uniqueness(r, config.solver.uniqueness_threshold, warned, log);
            }));
        } catch (const NonlinearSolveError& e) {
            fmt::print(log, "error: m = {}: {}\n", m, e.what());
            write_tables(config, runs, log);
            return 1;
        }
        fmt::print(log, "m = {} done\n", m);
    }
    write_tables(config, runs, log);
    return 0;
}

int cmd_stability(const RunConfig& config, std::ostream& log)
{
    ensure_dir(config.out_dir);
    auto mesh = std::make_shared<const Mesh>(unit_square_mesh(config.meshes.front()));
    const Spaces spaces = make_spaces(mesh);
    const ManufacturedSolution exact;
    const State initial = initialize_state(spaces, exact.initial_data(0.0));
    UsScheme scheme(spaces, config.solver);

    auto csv = open_output(config.out_dir / "stability.csv");
    csv << fmt::format("n,t,energy,energy_law_residual,mass,{}_iters\n", to_string(config.solver.method));
    const double m0 = scheme.mass(initial.u);
    double e_prev = scheme.energy(initial);
    csv << fmt::format("0,0,{:.17g},0,{:.17g},0\n", e_prev, m0);

    int first_energy_violation = -1;
    int first_mass_violation = -1;
    bool warned = false;
    const auto on_step = [&](const State&, const StepReport& r) {
        csv << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.n, r.t, r.energy, r.energy_law_residual, r.mass,
                           r.iterations);
        // a few ulps of slack: once the state is at rest consecutive energies agree to roundoff
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(e_prev);
        if (r.energy > e_prev + slack && first_energy_violation < 0) first_energy_violation = r.n;
        if (std::abs(r.mass - m0) > config.mass_tolerance && first_mass_violation < 0) first_mass_violation = r.n;
        e_prev = r.energy;
        warn_uniqueness(r, config.solver.uniqueness_threshold, warned, log);
    };
    try {
        (void)scheme.run(initial, 0, on_step);
    } catch (const NonlinearSolveError& e) {
        fmt::print(log, "error: {}\n", e.what());
        return 1;
    }
    csv.flush();
    int status = 0;
    if (first_energy_violation >= 0) {
        fmt::print(log, "energy increased at step {}\n", first_energy_violation);
        status = 1;
    }
    if (first_mass_violation >= 0) {
        fmt::print(log, "mass drift above {:.3g} at step {}\n", config.mass_tolerance, first_mass_violation);
        status = 1;
    }
    if (status == 0) fmt::print(log, "energy non-increasing and mass conserved over {} steps\n", config.solver.num_steps());
    return status;
}

int dispatch(const RunConfig& config, std::ostream& log)
{
    switch (config.mode) {
    case Mode::Run: return cmd_run(config, log);
    case Mode::Converge: return cmd_converge(config, log);
    case Mode::Stability: return cmd_stability(config, log);
    }
    return 2;
}

} // namespace chemorep::cli
