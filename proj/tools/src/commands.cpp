#include "smallscat_app/commands.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "smallscat/continuum_solver.hpp"
#include "smallscat/convergence.hpp"
#include "smallscat/discrete_solver.hpp"
#include "smallscat/errors.hpp"
#include "smallscat/io.hpp"
#include "smallscat/selfcheck.hpp"

namespace smallscat::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class OutputError : public Error {
public:
    using Error::Error;
};

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw OutputError("cannot write " + path.string());
    out << text;
    if (!out)
        throw OutputError("failed writing " + path.string());
}

void write_json(const fs::path& path, json doc, const RunConfig& cfg)
{
    doc["config_hash"] = cfg.hash;
    write_text(path, doc.dump(2) + "\n");
}

std::string provenance(const RunConfig& cfg)
{
    return "config_hash=" + cfg.hash;
}

fs::path prepare_dir(const RunConfig& cfg, const CommandOptions& opts)
{
    fs::path dir = opts.out_dir.empty() ? fs::path(cfg.out_dir) : opts.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

template <class Solution>
std::string shell_csv(const RunConfig& cfg, const Solution& sol)
{
    const auto pts = evaluation_shell(cfg.domain, cfg.shell_points, cfg.shell_gap);
    std::vector<CVec3> values;
    values.reserve(pts.size());
    for (const auto& x : pts)
        values.push_back(sol.field(x));
    return field_csv(pts, values, provenance(cfg));
}

int simulate(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out)
{
    const auto medium = cfg.medium();
    ParticleCloud cloud = generate_cloud(medium.density(), cfg.domain, cfg.radius, cfg.kappa, cfg.placement());
    cloud = assign_impedances(std::move(cloud), medium.impedance());
    const auto dir = prepare_dir(cfg, opts);
    if (cfg.write_json)
        write_json(dir / "cloud.json", cloud_to_json(cloud), cfg);

    const auto sol = solve_moments(assemble_system(cloud, cfg.wave, cfg.plane_wave()), cfg.solver);
    if (cfg.write_json)
        write_json(dir / "solution.json", solution_to_json(sol), cfg);
    if (cfg.write_csv)
        write_text(dir / "field.csv", shell_csv(cfg, sol));

    const auto& d = sol.diagnostics();
    fmt::print(out, "particles M = {} (expected {:.2f}), spacing d = {:.6g}, non-passive = {}\n", cloud.size(),
               cloud.expected_count, cloud.spacing, cloud.nonpassive);
    fmt::print(out, "solver {}: residual {:.3e}, condition {:.3e}, iterations {}\n", to_string(d.backend), d.residual,
               d.condition_estimate, d.iterations);
    return kSuccess;
}

int continuum(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out)
{
    const auto medium = cfg.medium();
    const CollocationGrid grid(cfg.domain, cfg.continuum_n, medium);
    const auto sol = solve_limit_curl(grid, cfg.wave, cfg.plane_wave(), cfg.solver);
    const auto dir = prepare_dir(cfg, opts);
    if (cfg.write_json)
        write_json(dir / "nodal.json", nodal_to_json(sol), cfg);
    if (cfg.write_csv)
        write_text(dir / "field.csv", shell_csv(cfg, sol));

    const auto& d = sol.diagnostics();
    fmt::print(out, "collocation n = {} ({} nodes)\n", grid.n(), grid.nodes().size());
    fmt::print(out, "solver {}: residual {:.3e}, condition {:.3e}, iterations {}\n", to_string(d.backend), d.residual,
               d.condition_estimate, d.iterations);
    return kSuccess;
}

int converge(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out)
{
    const auto medium = cfg.medium();
    const RefinementSchedule schedule(cfg.schedule, cfg.kappa, medium.density(), cfg.domain);
    RefinementOptions ropts;
    ropts.placement = cfg.placement();
    ropts.solver = cfg.solver;
    ropts.evaluation_points = evaluation_shell(cfg.domain, cfg.shell_points, cfg.shell_gap);
    const auto report = run_refinement(schedule, medium, cfg.plane_wave(), cfg.continuum_n, ropts);

    const auto dir = prepare_dir(cfg, opts);
    if (cfg.write_csv)
        write_text(dir / "report.csv", report.to_csv(opts.timing, provenance(cfg)));
    if (cfg.write_json)
        write_json(dir / "report.json", report.to_json(opts.timing), cfg);

    fmt::print(out, "{:>12} {:>12} {:>8} {:>14} {:>10}\n", "a", "d", "M", "eps_L2", "seconds");
    for (const auto& r : report.rows) {
        if (r.skipped)
            fmt::print(out, "{:>12.6g} {:>12.6g} {:>8} {:>14} {:>10}  {}\n", r.radius, r.spacing, "-", "skipped", "-",
                       r.note);
        else
            fmt::print(out, "{:>12.6g} {:>12.6g} {:>8} {:>14.6e} {:>10.2f}\n", r.radius, r.spacing, r.count, r.error,
                       r.wall_seconds);
    }
    return kSuccess;
}

int design(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out)
{
    const auto target = ScalarFieldProfile::parse(cfg.target_mu);
    const int n = cfg.design_n;
    const Vec3 lo = cfg.domain.lower();
    const double step = n > 1 ? cfg.domain.edge / (n - 1) : 0.0;

    std::string csv = "# " + provenance(cfg) + "\nx,y,z,re,im\n";
    std::size_t nonpassive = 0;
    double worst_round_trip = 0.0;
    const EffectiveMedium unit_density(ScalarFieldProfile::constant(1.0), ScalarFieldProfile::constant(0.0), cfg.wave,
                                       cfg.domain);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec3 x = n > 1 ? Vec3(lo + step * Vec3(i, j, k)) : cfg.domain.center;
                const DesignSample s = design_hn(target, cfg.wave, x);
                if (!s.passive)
                    ++nonpassive;
                const cplx mu = cfg.wave.mu0 / (1.0 + cfg.wave.moment_coefficient() * s.hn);
                worst_round_trip = std::max(worst_round_trip, std::abs(mu - target(x)) / std::abs(target(x)));
                csv += fmt::format("{},{},{},{},{}\n", format_double(x.x()), format_double(x.y()),
                                   format_double(x.z()), format_double(s.hn.real()), format_double(s.hn.imag()));
            }

    // Canonical split: N = 1 on the domain, h = hN, written as an expression
    // that can be pasted into profiles.impedance_h.
    const cplx beta = cfg.wave.moment_coefficient();
    const std::string h_expr = fmt::format("(({} / {}) - 1) / ({} + {} * i)", format_double(cfg.wave.mu0),
                                           FieldExpr::parse(cfg.target_mu).to_string(), format_double(beta.real()),
                                           format_double(beta.imag()));
    json split = {{"density_N", "1"},
                  {"impedance_h", h_expr},
                  {"grid_n", n},
                  {"nonpassive_points", nonpassive},
                  {"passive", nonpassive == 0},
                  {"max_round_trip_error", worst_round_trip}};

    const auto dir = prepare_dir(cfg, opts);
    if (cfg.write_csv)
        write_text(dir / "hn.csv", csv);
    if (cfg.write_json)
        write_json(dir / "split.json", std::move(split), cfg);

    fmt::print(out, "designed hN on {}^3 points; round-trip error {:.3e}; non-passive points {}\n", n,
               worst_round_trip, nonpassive);
    if (nonpassive > 0)
        fmt::print(out, "warning: Re h < 0 at {} points; the design needs active (non-passive) particles\n",
                   nonpassive);
    return kSuccess;
}

int validate(const RunConfig& cfg, std::ostream& out)
{
    const auto checks = run_self_checks(cfg.wave, *cfg.plane_wave(), cfg.seed);
    bool all = true;
    for (const auto& c : checks) {
        fmt::print(out, "{} {:<30} {:.3e} < {:.0e}\n", c.passed ? "PASS" : "FAIL", c.name, c.value, c.tolerance);
        all = all && c.passed;
    }
    fmt::print(out, "{} of {} checks passed\n",
               std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }), checks.size());
    return all ? kSuccess : kFailure;
}

} // namespace

int run_command(std::string_view command, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err)
{
    try {
        if (command == "simulate")
            return simulate(config, options, out);
        if (command == "continuum")
            return continuum(config, options, out);
        if (command == "converge")
            return converge(config, options, out);
        if (command == "design")
            return design(config, options, out);
        if (command == "validate")
            return validate(config, out);
        fmt::print(err, "error: unknown command '{}'\n", command);
        return kConfigError;
    } catch (const ConfigError& e) {
        fmt::print(err, "configuration error: {}\n", e.what());
        return kConfigError;
    } catch (const ParseError& e) {
        fmt::print(err, "configuration error: {}\n", e.what());
        return kConfigError;
    } catch (const EvalError& e) {
        fmt::print(err, "configuration error: {}\n", e.what());
        return kConfigError;
    } catch (const SolverError& e) {
        fmt::print(err, "solver error: {}\n", e.what());
        return kSolverError;
    } catch (const DomainError& e) {
        fmt::print(err, "solver error: {}\n", e.what());
        return kSolverError;
    } catch (const SingularMediumError& e) {
        fmt::print(err, "solver error: {}\n", e.what());
        return kSolverError;
    } catch (const OutputError& e) {
        fmt::print(err, "output error: {}\n", e.what());
        return kFailure;
    }
}

int run_command_with_config(std::string_view command, const fs::path& config_path, const CommandOptions& options,
                            std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    try {
        cfg = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
    } catch (const ConfigError& e) {
        fmt::print(err, "configuration error: {}\n", e.what());
        return kConfigError;
    }
    return run_command(command, cfg, options, out, err);
}

} // namespace smallscat::app
