#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "smallscat/medium.hpp"
#include "smallscat/types.hpp"

namespace smallscat {

enum class PlacementMode { lattice, stratified };

struct PlacementOptions {
    PlacementMode mode = PlacementMode::lattice;
    std::uint64_t seed = 0;
    /// Refuse configurations whose expected particle count exceeds this.
    std::size_t cap = 20000;
};

/// Small balls of radius a centered at `positions`, with boundary impedances
/// zeta_m = h(x_m) / a^kappa.
struct ParticleCloud {
    std::vector<Vec3> positions;
    std::vector<cplx> impedances;
    double radius = 0.0;
    double kappa = 0.5;
    /// Guaranteed lower bound on pairwise distances.
    double spacing = 0.0;
    Box domain;
    /// a^{-(2-kappa)} * integral of N as realized by the lattice quadrature.
    double expected_count = 0.0;
    /// Number of particles with Re h(x_m) < 0 (non-passive impedance).
    std::size_t nonpassive = 0;

    std::size_t size() const noexcept { return positions.size(); }
    /// zeta_m a^2 = h(x_m) a^{2-kappa}, the strength entering the coupling.
    cplx strength(std::size_t m) const { return impedances[m] * radius * radius; }
};

struct DensitySurvey {
    double peak = 0.0;
    double integral = 0.0;
};

/// Peak and midpoint-rule integral of N over a 32^3 sampling of the domain.
/// Throws ConfigError if N is negative or complex at a sample.
DensitySurvey survey_density(const ScalarFieldProfile& density, const Box& domain);

/// a^{-(2-kappa)}: particles per unit of integrated density.
double count_scale(double radius, double kappa);

/// Cell edge at which a lattice with density `density_peak` holds one
/// particle per cell: (a^{2-kappa} / peak)^{1/3}.
double spacing_law(double radius, double kappa, double density_peak);

/// Places particles so that any box Delta receives about
/// a^{-(2-kappa)} * integral_Delta N particles.
///
/// The domain is split into a cubic lattice fine enough that every cell expects
/// at most one particle; the lattice size is rounded up to 2^j or 3 * 2^j so
/// that dyadic sub-boxes are unions of whole cells. Cells are visited along a Morton curve and selected by
/// systematic sampling of the running expected count, so every run of
/// consecutive cells receives its expected count to within one particle, and
/// the total is round(expected). Lattice mode puts the particle at the cell
/// center; stratified mode jitters it by up to a quarter cell per axis using a
/// generator seeded with `options.seed`.
///
/// Throws ConfigError for N < 0, a <= 0, kappa outside (0,1), a >= spacing, or
/// an expected count above `options.cap`.
ParticleCloud generate_cloud(const ScalarFieldProfile& density, const Box& domain, double radius,
                             double kappa, const PlacementOptions& options = {});

/// zeta_m = h(x_m) / a^kappa. Non-passive sites (Re h < 0) are counted, not rejected.
ParticleCloud assign_impedances(ParticleCloud cloud, const ScalarFieldProfile& impedance);

nlohmann::json cloud_to_json(const ParticleCloud& cloud);
/// Throws ConfigError naming the missing or malformed key.
ParticleCloud cloud_from_json(const nlohmann::json& doc);

} // namespace smallscat
