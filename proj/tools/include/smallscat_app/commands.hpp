#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "smallscat_app/config.hpp"

namespace smallscat::app {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2, kSolverError = 3 };

struct CommandOptions {
    std::filesystem::path out_dir;
    /// Adds wall-clock columns to the convergence report.
    bool timing = false;
};

/// Runs one of simulate, continuum, converge, design, validate. Errors are
/// reported on `err` and mapped to exit codes: 2 for configuration problems,
/// 3 for solver failures.
int run_command(std::string_view command, const RunConfig& config, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

/// Same, loading the configuration first (empty path: built-in defaults).
int run_command_with_config(std::string_view command, const std::filesystem::path& config_path,
                            const CommandOptions& options, std::ostream& out, std::ostream& err);

} // namespace smallscat::app
