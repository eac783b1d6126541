#pragma once

#include "chemorep/mms.hpp"
#include "chemorep/scheme.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chemorep::cli {

enum class Mode { Run, Converge, Stability };

[[nodiscard]] std::string to_string(Mode m);
/// "run", "converge" or "stability"; anything else throws InvalidArgument.
[[nodiscard]] Mode parse_mode(const std::string& s);

struct RunConfig {
    Mode mode{Mode::Run};
    std::vector<int> meshes{40};
    SolverConfig solver;
    AggregationOptions aggregation;
    std::filesystem::path out_dir{"out"};
    int snapshot_stride{0};
    double mass_tolerance{1e-10}; ///< stability mode: allowed |int u^n - int u^0|

    /// Throws InvalidArgument naming the offending key.
    void validate() const;
};

/// Applies `key = value` settings (INI syntax) on top of `config`. Keys may appear at top level
/// or in their section:
///   [mesh] m                         list "40,50,60" allowed
///   [time] k, T
///   [solver] method, tol, max_nl_iter, roundoff_floor, linear_solver, linear_tol,
///            linear_max_iter, uniqueness_threshold, check_scheme_residual
///   [output] out, snapshots
///   [errors] l2_includes_initial, max_includes_initial
///   [stability] mass_tolerance
/// Unknown keys and sections are errors.
void apply_config_text(RunConfig& config, std::istream& is, const std::string& source = "<config>");
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Parses "40,50,60".
[[nodiscard]] std::vector<int> parse_mesh_list(const std::string& s);

/// Full command line: `<mode> [--config PATH] [--m LIST] [--k REAL] [--T REAL] [--method NAME]
/// [--tol REAL] [--out DIR] [--snapshots INT]`. Flags override the config file. Throws
/// InvalidArgument on validation failures; `--help` and usage errors are reported through
/// the returned exit code with `config` left empty.
struct ParseResult {
    std::optional<RunConfig> config;
    int exit_code{0};
};
[[nodiscard]] ParseResult parse_command_line(int argc, const char* const* argv);

} // namespace chemorep::cli
