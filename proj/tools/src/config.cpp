#include "chemorep/cli/config.hpp"

#include "chemorep/error.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace chemorep::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InvalidArgument(fmt::format("{}: expected a real number, got '{}'", key, raw));
    return v;
}

int to_int(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidArgument(fmt::format("{}: expected an integer, got '{}'", key, raw));
    return v;
}

bool to_bool(const std::string& key, const std::string& raw)
{
    std::string s = trim(raw);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw InvalidArgument(fmt::format("{}: expected a boolean, got '{}'", key, raw));
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

struct KeyInfo {
    std::string section;
    Setter set;
};

const std::map<std::string, KeyInfo>& known_keys()
{
    static const std::map<std::string, KeyInfo> keys{
        {"m", {"mesh", [](RunConfig& c, const std::string& v) { c.meshes = parse_mesh_list(v); }}},
        {"k", {"time", [](RunConfig& c, const std::string& v) { c.solver.k = to_double("k", v); }}},
        {"T", {"time", [](RunConfig& c, const std::string& v) { c.solver.T = to_double("T", v); }}},
        {"method", {"solver", [](RunConfig& c, const std::string& v) { c.solver.method = parse_method(trim(v)); }}},
        {"tol", {"solver", [](RunConfig& c, const std::string& v) { c.solver.tol = to_double("tol", v); }}},
        {"max_nl_iter",
         {"solver", [](RunConfig& c, const std::string& v) { c.solver.max_nl_iter = to_int("max_nl_iter", v); }}},
        {"roundoff_floor",
         {"solver",
          [](RunConfig& c, const std::string& v) { c.solver.roundoff_floor = to_double("roundoff_floor", v); }}},
        {"linear_solver",
         {"solver",
          [](RunConfig& c, const std::string& v) {
              const std::string s = trim(v);
              if (s == "direct")
                  c.solver.linear_solver = LinearSolverKind::Direct;
              else if (s == "krylov")
                  c.solver.linear_solver = LinearSolverKind::Krylov;
              else
                  throw InvalidArgument(fmt::format("linear_solver: expected 'direct' or 'krylov', got '{}'", v));
          }}},
        {"linear_tol",
         {"solver", [](RunConfig& c, const std::string& v) { c.solver.linear_tol = to_double("linear_tol", v); }}},
        {"linear_max_iter",
         {"solver",
          [](RunConfig& c, const std::string& v) { c.solver.linear_max_iter = to_int("linear_max_iter", v); }}},
        {"uniqueness_threshold",
         {"solver",
          [](RunConfig& c, const std::string& v) {
              c.solver.uniqueness_threshold = to_double("uniqueness_threshold", v);
          }}},
        {"check_scheme_residual",
         {"solver",
          [](RunConfig& c, const std::string& v) {
              c.solver.check_scheme_residual = to_bool("check_scheme_residual", v);
          }}},
        {"out", {"output", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); }}},
        {"snapshots",
         {"output", [](RunConfig& c, const std::string& v) { c.snapshot_stride = to_int("snapshots", v); }}},
        {"l2_includes_initial",
         {"errors",
          [](RunConfig& c, const std::string& v) {
              c.aggregation.l2_includes_initial = to_bool("l2_includes_initial", v);
          }}},
        {"max_includes_initial",
         {"errors",
          [](RunConfig& c, const std::string& v) {
              c.aggregation.max_includes_initial = to_bool("max_includes_initial", v);
          }}},
        {"mass_tolerance",
         {"stability",
          [](RunConfig& c, const std::string& v) { c.mass_tolerance = to_double("mass_tolerance", v); }}},
    };
    return keys;
}

void apply_key(RunConfig& config, const std::string& section, const std::string& key, const std::string& value)
{
    const auto& keys = known_keys();
    const auto it = keys.find(key);
    const std::string where = section.empty() ? key : section + "." + key;
    if (it == keys.end()) throw InvalidArgument(fmt::format("{}: unknown key", where));
    if (!section.empty() && section != it->second.section)
        throw InvalidArgument(fmt::format("{}: key belongs to section [{}]", where, it->second.section));
    it->second.set(config, value);
}

bool is_section_name(const std::string& name)
{
    static const std::vector<std::string> sections{"mesh", "time", "solver", "output", "errors", "stability"};
    return std::find(sections.begin(), sections.end(), name) != sections.end();
}

} // namespace

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::Run: return "run";
    case Mode::Converge: return "converge";
    case Mode::Stability: return "stability";
    }
    return "?";
}

Mode parse_mode(const std::string& s)
{
    if (s == "run") return Mode::Run;
    if (s == "converge") return Mode::Converge;
    if (s == "stability") return Mode::Stability;
    throw InvalidArgument(fmt::format("mode: expected 'run', 'converge' or 'stability', got '{}'", s));
}

std::vector<int> parse_mesh_list(const std::string& s)
{
    std::vector<int> out;
    std::string item;
    std::string rest = s;
    std::size_t start = 0;
    while (start <= rest.size()) {
        const auto comma = rest.find(',', start);
        item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(to_int("m", item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void RunConfig::validate() const
{
    if (meshes.empty()) throw InvalidArgument("m: at least one mesh size is required");
    for (int m : meshes)
        if (m < 1) throw InvalidArgument(fmt::format("m: mesh sizes must be >= 1, got {}", m));
    if (mode == Mode::Converge) {
        if (meshes.size() < 2) throw InvalidArgument("m: converge mode needs at least two mesh sizes");
        for (std::size_t i = 1; i < meshes.size(); ++i)
            if (meshes[i] <= meshes[i - 1])
                throw InvalidArgument(fmt::format("m: mesh list must be strictly increasing ({} after {})", meshes[i],
                                                  meshes[i - 1]));
    } else if (meshes.size() != 1) {
        throw InvalidArgument(fmt::format("m: {} mode takes a single mesh size", to_string(mode)));
    }
    if (snapshot_stride < 0) throw InvalidArgument(fmt::format("snapshots: must be >= 0, got {}", snapshot_stride));
    if (!(mass_tolerance >= 0.0))
        throw InvalidArgument(fmt::format("mass_tolerance: must be >= 0, got {}", mass_tolerance));
    solver.validate();
}

void apply_config_text(RunConfig& config, std::istream& is, const std::string& source)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidArgument(fmt::format("{}: line {}: {}", source, e.line(), e.message()));
    }
    for (const auto& [name, node] : tree) {
        if (node.empty() && !is_section_name(name)) {
            apply_key(config, "", name, node.data());
            continue;
        }
        if (!is_section_name(name)) throw InvalidArgument(fmt::format("[{}]: unknown section", name));
        for (const auto& [key, value] : node) {
            if (!value.empty()) throw InvalidArgument(fmt::format("{}.{}: nested keys are not allowed", name, key));
            apply_key(config, name, key, value.data());
        }
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw IoError(fmt::format("cannot open config '{}'", path.string()));
    apply_config_text(config, is, path.string());
}

ParseResult parse_command_line(int argc, const char* const* argv)
{
    CLI::App app{"Finite element solver for the chemo-repulsion model with quadratic production"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string m;
    double k = 0.0;
    double T = 0.0;
    std::string method;
    double tol = 0.0;
    std::string out;
    int snapshots = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--m", m, "mesh size m, or a comma separated list in converge mode");
        sub->add_option("--k", k, "time step");
        sub->add_option("--T", T, "final time");
        sub->add_option("--method", method, "picard or newton");
        sub->add_option("--tol", tol, "relative nonlinear tolerance");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--snapshots", snapshots, "snapshot stride, 0 = final state only");
    };
    CLI::App* run = app.add_subcommand("run", "single manufactured-solution run with field output");
    CLI::App* converge = app.add_subcommand("converge", "manufactured-solution convergence sweep");
    CLI::App* stability = app.add_subcommand("stability", "unforced energy and mass study");
    for (CLI::App* sub : {run, converge, stability}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return {std::nullopt, app.exit(e)};
    }

    CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    config.mode = parse_mode(sub->get_name());
    if (!config_path.empty()) apply_config_file(config, config_path);
    if (sub->count("--m")) config.meshes = parse_mesh_list(m);
    if (sub->count("--k")) config.solver.k = k;
    if (sub->count("--T")) config.solver.T = T;
    if (sub->count("--method")) config.solver.method = parse_method(method);
    if (sub->count("--tol")) config.solver.tol = tol;
    if (sub->count("--out")) config.out_dir = out;
    if (sub->count("--snapshots")) config.snapshot_stride = snapshots;
    config.validate();
    return {std::move(config), 0};
}

} // namespace chemorep::cli
