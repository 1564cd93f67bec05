#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "smallscat/continuum_solver.hpp"
#include "smallscat/coupling.hpp"
#include "smallscat/placement.hpp"

namespace smallscat {

struct RefinementStep {
    double radius;
    /// Spacing law d(a) = (a^{2-kappa} / max N)^{1/3}.
    double spacing;
    double expected_count;
};

/// Decreasing particle radii with the spacing law attached. Construction
/// enforces a, d and a/d strictly decreasing and throws ConfigError otherwise.
class RefinementSchedule {
public:
    RefinementSchedule(const std::vector<double>& radii, double kappa, const ScalarFieldProfile& density,
                       const Box& domain);

    const std::vector<RefinementStep>& steps() const noexcept { return steps_; }
    double kappa() const noexcept { return kappa_; }

private:
    std::vector<RefinementStep> steps_;
    double kappa_;
};

/// Quasi-uniform (Fibonacci) points on a sphere around the domain center,
/// at distance gap_fraction * diameter outside the circumscribed sphere.
std::vector<Vec3> evaluation_shell(const Box& domain, std::size_t count, double gap_fraction = 0.2);

struct ConvergenceRow {
    double radius = 0.0;
    double spacing = 0.0;
    std::size_t count = 0;
    /// ||E_discrete - E_continuum||_2 / ||E_continuum||_2 over the evaluation points.
    double error = 0.0;
    double wall_seconds = 0.0;
    bool skipped = false;
    std::string note;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;

    /// Columns a,d,M,eps_L2[,wall_time],status. Wall times are excluded unless
    /// requested so that reruns are byte-identical.
    std::string to_csv(bool include_timing = false, std::string_view provenance = {}) const;
    nlohmann::json to_json(bool include_timing = false) const;
};

struct RefinementOptions {
    PlacementOptions placement{};
    SolverOptions solver{};
    std::vector<Vec3> evaluation_points;
};

/// Solves the particle system at every schedule step and compares its field
/// with `reference` at the evaluation points. Steps whose expected count
/// exceeds the placement cap are skipped and flagged.
ConvergenceReport run_refinement(const RefinementSchedule& schedule, const EffectiveMedium& medium,
                                 std::shared_ptr<const IncidentField> incident, const ContinuumSolution& reference,
                                 const RefinementOptions& options);

/// Same, solving the continuum reference on an n^3 grid first.
ConvergenceReport run_refinement(const RefinementSchedule& schedule, const EffectiveMedium& medium,
                                 std::shared_ptr<const IncidentField> incident, int grid_n,
                                 const RefinementOptions& options);

/// Relative discrete L2 distance ||a - b|| / ||b|| (absolute if b vanishes).
double relative_l2(const std::vector<CVec3>& a, const std::vector<CVec3>& b);

} // namespace smallscat
