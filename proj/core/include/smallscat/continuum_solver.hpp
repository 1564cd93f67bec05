#pragma once

// Collocation (Nystrom, midpoint rule) for the limiting equation written for
// the curl W = curl E:
//   W(y_c) = curl E0(y_c) - beta * sum_{c' != c} D(y_c, y_c') W(y_c') w_c',
// with beta = (8 pi / 3) i omega eps and nodal weights w_c = h(y_c) N(y_c) v.
// The self cell is excluded exactly as the self particle is excluded in the
// particle system, so a lattice cloud with h(x_m) a^{2-kappa} = w_c produces
// the same linear system.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smallscat/coupling.hpp"
#include "smallscat/fields.hpp"
#include "smallscat/medium.hpp"

namespace smallscat {

class CollocationGrid {
public:
    /// n^3 cubic cells tiling `domain`, weights h N v at the cell centers.
    CollocationGrid(const Box& domain, int n, const EffectiveMedium& medium);
    /// Explicit nodal weights, ordered like nodes().
    CollocationGrid(const Box& domain, int n, std::vector<cplx> weights);

    int n() const noexcept { return n_; }
    double spacing() const noexcept { return domain_.edge / n_; }
    double cell_volume() const noexcept { return spacing() * spacing() * spacing(); }
    const Box& domain() const noexcept { return domain_; }
    /// Cell centers, x index fastest.
    const std::vector<Vec3>& nodes() const noexcept { return nodes_; }
    const std::vector<cplx>& weights() const noexcept { return weights_; }
    std::size_t index(int i, int j, int k) const
    {
        return static_cast<std::size_t>(i + n_ * (j + n_ * k));
    }

private:
    void build_nodes();

    Box domain_;
    int n_;
    std::vector<Vec3> nodes_;
    std::vector<cplx> weights_;
};

struct CollocationSystem {
    CouplingOperator op;
    Eigen::VectorXcd rhs;
    Eigen::MatrixXcd matrix() const { return op.assemble(); }
};

CollocationSystem assemble_collocation_system(const CollocationGrid& grid, const WaveParameters& wave,
                                              const IncidentField& incident);

class ContinuumSolution {
public:
    ContinuumSolution(CollocationGrid grid, const WaveParameters& wave,
                      std::shared_ptr<const IncidentField> incident, Eigen::VectorXcd nodal_curl,
                      SolverDiagnostics diagnostics);

    const CollocationGrid& grid() const noexcept { return grid_; }
    const WaveParameters& wave() const noexcept { return wave_; }
    const IncidentField& incident() const noexcept { return *incident_; }
    const SolverDiagnostics& diagnostics() const noexcept { return diagnostics_; }

    /// W_c ~ (curl E)(y_c).
    CVec3 nodal_curl(std::size_t c) const { return curl_.segment<3>(3 * static_cast<Eigen::Index>(c)); }

    /// E(x) = E0(x) - beta * sum_c [grad_x g(x, y_c), W_c] w_c; a node coinciding
    /// with x is left out of the sum.
    CVec3 field(const Vec3& x) const;

    /// Trilinear interpolation of the nodal curl. Empty outside the hull of the nodes.
    std::optional<CVec3> interpolated_curl(const Vec3& x) const;

private:
    CollocationGrid grid_;
    WaveParameters wave_;
    std::shared_ptr<const IncidentField> incident_;
    Eigen::VectorXcd curl_;
    SolverDiagnostics diagnostics_;
    Wavenumber k_;
    cplx coefficient_;
};

ContinuumSolution solve_limit_curl(const CollocationGrid& grid, const WaveParameters& wave,
                                   std::shared_ptr<const IncidentField> incident,
                                   const SolverOptions& options = {});

struct PdeResidual {
    bool evaluated = false;
    double value = 0.0;
    std::string notice;
};

/// Relative residual of
///   curl curl E - K^2 E + (beta / Psi) [grad(hN), curl E]
/// at an interior point x, normalized by |K^2 E|.
///
/// curl curl E is formed as (curl curl E0 by central differences)
/// + k^2 (E - E0) - beta * curl(hN W), the last curl taken by central
/// differences of the interpolated nodal curl; grad(hN) is also a central
/// difference. Points too close to the boundary of the node hull for the
/// difference stencil are skipped with a notice.
PdeResidual effective_pde_residual(const ContinuumSolution& solution, const EffectiveMedium& medium,
                                   const Vec3& x);

nlohmann::json nodal_to_json(const ContinuumSolution& solution);

} // namespace smallscat
