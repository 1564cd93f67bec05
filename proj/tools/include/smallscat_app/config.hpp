#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smallscat/coupling.hpp"
#include "smallscat/fields.hpp"
#include "smallscat/medium.hpp"
#include "smallscat/placement.hpp"

namespace smallscat::app {

/// Validated run configuration. Every key has a default; unknown keys are
/// rejected with a ConfigError whose path() is the dotted key, e.g.
/// "particles.kappa".
struct RunConfig {
    WaveParameters wave;

    CVec3 amplitude{1.0, 0.0, 0.0};
    Vec3 direction{0.0, 0.0, 1.0};

    Box domain;

    std::string density_expr;
    std::string impedance_expr;

    double radius = 0.05;
    double kappa = 0.5;
    PlacementMode mode = PlacementMode::lattice;
    std::uint64_t seed = 1;
    std::size_t cap = 20000;

    int continuum_n = 16;

    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;

    SolverOptions solver;

    std::size_t shell_points = 64;
    double shell_gap = 0.2;

    std::vector<double> schedule;

    std::string target_mu = "1";
    int design_n = 17;

    /// Fully expanded configuration (defaults filled in) and its FNV-1a hash.
    nlohmann::json canonical;
    std::string hash;

    EffectiveMedium medium() const;
    std::shared_ptr<const PlaneWave> plane_wave() const;
    PlacementOptions placement() const;
};

/// Defaults as a JSON document, in the same schema parse_config reads.
nlohmann::json default_config();

/// Throws ConfigError naming the JSON path of the first problem.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a file; a missing or malformed file is a ConfigError.
RunConfig load_config(const std::filesystem::path& path);

} // namespace smallscat::app
