#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "smallscat/coupling.hpp"
#include "smallscat/fields.hpp"
#include "smallscat/medium.hpp"
#include "smallscat/placement.hpp"

namespace smallscat {

/// (I + C) P = P0 for the curl-moments P_m = (curl E)(x_m), with
/// C_jm = (8 pi / 3) i omega eps h(x_m) a^{2-kappa} D(x_j, x_m) for m != j
/// and P0_j = (curl E0)(x_j).
struct ParticleSystem {
    CouplingOperator op;
    Eigen::VectorXcd rhs;
    std::shared_ptr<const IncidentField> incident;
    double radius = 0.0;

    Eigen::MatrixXcd matrix() const { return op.assemble(); }
};

/// Throws DomainError naming the indices of coincident particles.
ParticleSystem assemble_system(const ParticleCloud& cloud, const WaveParameters& wave,
                               std::shared_ptr<const IncidentField> incident);

class DiscreteSolution {
public:
    DiscreteSolution(const ParticleSystem& system, Eigen::VectorXcd moments, SolverDiagnostics diagnostics);

    std::size_t size() const noexcept { return positions_.size(); }
    const std::vector<Vec3>& positions() const noexcept { return positions_; }
    /// Curl-moment P_m.
    CVec3 moment(std::size_t m) const { return moments_.segment<3>(3 * static_cast<Eigen::Index>(m)); }
    /// Charge Q_m = -(8 pi / 3) i omega eps h(x_m) a^{2-kappa} P_m.
    const CVec3& charge(std::size_t m) const { return charges_[m]; }
    const std::vector<CVec3>& charges() const noexcept { return charges_; }
    const SolverDiagnostics& diagnostics() const noexcept { return diagnostics_; }

    /// E(x) = E0(x) + sum_m grad_x g(x, x_m) x Q_m. Throws DomainError when x is
    /// within the exclusion radius of a particle.
    CVec3 field(const Vec3& x) const;
    CVec3 scattered_field(const Vec3& x) const;

    /// Defaults to three particle radii.
    double exclusion_radius() const noexcept { return exclusion_radius_; }
    void set_exclusion_radius(double r) { exclusion_radius_ = r; }

private:
    std::vector<Vec3> positions_;
    Eigen::VectorXcd moments_;
    std::vector<CVec3> charges_;
    std::shared_ptr<const IncidentField> incident_;
    Wavenumber k_;
    SolverDiagnostics diagnostics_;
    double exclusion_radius_;
};

DiscreteSolution solve_moments(const ParticleSystem& system, const SolverOptions& options = {});

/// Q_m for every particle.
std::vector<CVec3> charges(const DiscreteSolution& solution);

nlohmann::json solution_to_json(const DiscreteSolution& solution);

} // namespace smallscat
