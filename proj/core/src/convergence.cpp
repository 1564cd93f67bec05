#include "smallscat/convergence.hpp"

#include <chrono>

#include <fmt/format.h>

#include "smallscat/discrete_solver.hpp"
#include "smallscat/errors.hpp"
#include "smallscat/io.hpp"

namespace smallscat {

RefinementSchedule::RefinementSchedule(const std::vector<double>& radii, double kappa,
                                       const ScalarFieldProfile& density, const Box& domain)
    : kappa_(kappa)
{
    if (!(kappa > 0.0 && kappa < 1.0))
        throw ConfigError("kappa must lie in (0, 1)", "particles.kappa");
    const DensitySurvey survey = survey_density(density, domain);
    for (double a : radii) {
        if (!(a > 0.0))
            throw ConfigError("radii must be positive", "convergence.schedule");
        const double d = survey.peak > 0.0 ? spacing_law(a, kappa, survey.peak) : domain.edge;
        steps_.push_back({a, d, count_scale(a, kappa) * survey.integral});
    }
    for (std::size_t s = 1; s < steps_.size(); ++s) {
        const auto& prev = steps_[s - 1];
        const auto& cur = steps_[s];
        if (!(cur.radius < prev.radius))
            throw ConfigError("radii must be strictly decreasing", "convergence.schedule");
        if (survey.peak > 0.0 &&
            (!(cur.spacing < prev.spacing) || !(cur.radius / cur.spacing < prev.radius / prev.spacing)))
            throw ConfigError("spacing and a/d must be strictly decreasing", "convergence.schedule");
    }
}

std::vector<Vec3> evaluation_shell(const Box& domain, std::size_t count, double gap_fraction)
{
    const double radius = 0.5 * domain.diameter() + gap_fraction * domain.diameter();
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        pts.push_back(domain.center + radius * Vec3(rho * std::cos(phi), rho * std::sin(phi), z));
    }
    return pts;
}

double relative_l2(const std::vector<CVec3>& a, const std::vector<CVec3>& b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]).squaredNorm();
        den += b[i].squaredNorm();
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

ConvergenceReport run_refinement(const RefinementSchedule& schedule, const EffectiveMedium& medium,
                                 std::shared_ptr<const IncidentField> incident, const ContinuumSolution& reference,
                                 const RefinementOptions& options)
{
    std::vector<CVec3> ref_values;
    ref_values.reserve(options.evaluation_points.size());
    for (const auto& x : options.evaluation_points)
        ref_values.push_back(reference.field(x));

    ConvergenceReport report;
    for (const auto& step : schedule.steps()) {
        ConvergenceRow row;
        row.radius = step.radius;
        row.spacing = step.spacing;
        if (step.expected_count > static_cast<double>(options.placement.cap)) {
            row.skipped = true;
            row.note = fmt::format("expected count {:.0f} exceeds cap {}", step.expected_count, options.placement.cap);
            report.rows.push_back(std::move(row));
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        ParticleCloud cloud = generate_cloud(medium.density(), medium.domain(), step.radius, schedule.kappa(),
                                             options.placement);
        cloud = assign_impedances(std::move(cloud), medium.impedance());
        row.count = cloud.size();
        const auto solution = solve_moments(assemble_system(cloud, medium.wave(), incident), options.solver);
        std::vector<CVec3> values;
        values.reserve(options.evaluation_points.size());
        for (const auto& x : options.evaluation_points)
            values.push_back(solution.field(x));
        row.error = relative_l2(values, ref_values);
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.rows.push_back(std::move(row));
    }
    return report;
}

ConvergenceReport run_refinement(const RefinementSchedule& schedule, const EffectiveMedium& medium,
                                 std::shared_ptr<const IncidentField> incident, int grid_n,
                                 const RefinementOptions& options)
{
    const CollocationGrid grid(medium.domain(), grid_n, medium);
    const auto reference = solve_limit_curl(grid, medium.wave(), incident, options.solver);
    return run_refinement(schedule, medium, std::move(incident), reference, options);
}

std::string ConvergenceReport::to_csv(bool include_timing, std::string_view provenance) const
{
    std::string out;
    if (!provenance.empty())
        out += fmt::format("# {}\n", provenance);
    out += include_timing ? "a,d,M,eps_L2,wall_time,status\n" : "a,d,M,eps_L2,status\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},", format_double(r.radius), format_double(r.spacing), r.count,
                           r.skipped ? std::string("nan") : format_double(r.error));
        if (include_timing)
            out += format_double(r.wall_seconds) + ",";
        out += r.skipped ? "skipped" : "ok";
        out += '\n';
    }
    return out;
}

nlohmann::json ConvergenceReport::to_json(bool include_timing) const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row = {{"a", r.radius}, {"d", r.spacing}, {"M", r.count}, {"skipped", r.skipped}};
        row["eps_L2"] = r.skipped ? nlohmann::json() : nlohmann::json(r.error);
        if (include_timing)
            row["wall_time"] = r.wall_seconds;
        if (!r.note.empty())
            row["note"] = r.note;
        arr.push_back(std::move(row));
    }
    return {{"rows", std::move(arr)}};
}

} // namespace smallscat
