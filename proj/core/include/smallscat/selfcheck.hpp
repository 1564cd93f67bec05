#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smallscat/fields.hpp"
#include "smallscat/medium.hpp"

namespace smallscat {

struct CheckResult {
    std::string name;
    double value = 0.0;     // worst observed error
    double tolerance = 0.0; // pass if value < tolerance
    bool passed = false;
};

/// Kernel and identity checks behind the `validate` command: finite-difference
/// comparisons for g, grad g and D, the trace identity, symmetry, incident
/// field identities, the single-particle closed form and the design round trip.
std::vector<CheckResult> run_self_checks(const WaveParameters& wave, const PlaneWave& incident,
                                         std::uint64_t seed = 1);

} // namespace smallscat
