#include "smallscat/discrete_solver.hpp"

#include <fmt/format.h>

#include "smallscat/errors.hpp"

namespace smallscat {

namespace {

std::vector<cplx> particle_strengths(const ParticleCloud& cloud)
{
    std::vector<cplx> s(cloud.size());
    for (std::size_t m = 0; m < cloud.size(); ++m)
        s[m] = cloud.strength(m);
    return s;
}

nlohmann::json six_reals(const CVec3& v)
{
    return {v.x().real(), v.x().imag(), v.y().real(), v.y().imag(), v.z().real(), v.z().imag()};
}

} // namespace

ParticleSystem assemble_system(const ParticleCloud& cloud, const WaveParameters& wave,
                               std::shared_ptr<const IncidentField> incident)
{
    if (!incident)
        throw std::invalid_argument("incident field is required");
    const double min_separation = 1e-12 * cloud.domain.diameter();
    CouplingOperator op(cloud.positions, particle_strengths(cloud), wave, min_separation);
    Eigen::VectorXcd rhs = curl_rhs(cloud.positions, *incident);
    return {std::move(op), std::move(rhs), std::move(incident), cloud.radius};
}

DiscreteSolution::DiscreteSolution(const ParticleSystem& system, Eigen::VectorXcd moments,
                                   SolverDiagnostics diagnostics)
    : positions_(system.op.positions()),
      moments_(std::move(moments)),
      incident_(system.incident),
      k_(system.op.wavenumber()),
      diagnostics_(diagnostics),
      exclusion_radius_(3.0 * system.radius)
{
    const auto& s = system.op.strengths();
    charges_.resize(positions_.size());
    for (std::size_t m = 0; m < positions_.size(); ++m)
        charges_[m] = (-system.op.coefficient() * s[m]) * moment(m);
}

CVec3 DiscreteSolution::scattered_field(const Vec3& x) const
{
    CVec3 e = CVec3::Zero();
    for (std::size_t m = 0; m < positions_.size(); ++m) {
        if ((x - positions_[m]).norm() < exclusion_radius_)
            throw DomainError(fmt::format("field point {} lies within the exclusion radius of particle {}",
                                          format_point(x), m));
        if (charges_[m].isZero(0.0))
            continue;
        e += cross(grad_green(x, positions_[m], k_, 0.0), charges_[m]);
    }
    return e;
}

CVec3 DiscreteSolution::field(const Vec3& x) const
{
    return incident_->value(x) + scattered_field(x);
}

DiscreteSolution solve_moments(const ParticleSystem& system, const SolverOptions& options)
{
    auto solved = solve_coupled(system.op, system.rhs, options);
    return DiscreteSolution(system, std::move(solved.solution), solved.diagnostics);
}

std::vector<CVec3> charges(const DiscreteSolution& solution)
{
    return solution.charges();
}

nlohmann::json solution_to_json(const DiscreteSolution& solution)
{
    nlohmann::json particles = nlohmann::json::array();
    for (std::size_t m = 0; m < solution.size(); ++m) {
        const auto& x = solution.positions()[m];
        particles.push_back(
            {{"x", {x.x(), x.y(), x.z()}}, {"P", six_reals(solution.moment(m))}, {"Q", six_reals(solution.charge(m))}});
    }
    const auto& d = solution.diagnostics();
    nlohmann::json diag = {{"backend", to_string(d.backend)}, {"residual", d.residual}, {"iterations", d.iterations}};
    diag["condition_estimate"] = std::isfinite(d.condition_estimate) ? nlohmann::json(d.condition_estimate) : nlohmann::json();
    return {{"diagnostics", std::move(diag)}, {"particles", std::move(particles)}};
}

} // namespace smallscat
