#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smallscat/coupling.hpp"
#include "smallscat_app/commands.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Electromagnetic scattering by many small impedance particles and the effective medium they create"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    int threads = 0;
    bool timing = false;

    const char* commands[][2] = {
        {"simulate", "Place particles, solve for their moments, write cloud.json, solution.json, field.csv"},
        {"continuum", "Solve the limiting equation by collocation, write nodal.json, field.csv"},
        {"converge", "Run the a -> 0 refinement study, write report.csv and report.json"},
        {"design", "Compute hN for a target permeability, write hn.csv and split.json"},
        {"validate", "Run the kernel and identity self-checks"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON configuration file (defaults when omitted)");
        sub->add_option("--out", out_dir, "Output directory (overrides outputs.dir)");
        sub->add_option("--threads", threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
        if (std::string(name) == "converge")
            sub->add_flag("--timing", timing, "Add wall-clock columns to the report (breaks byte-identity)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : smallscat::app::kConfigError;
    }

    smallscat::set_thread_count(threads);
    const std::string command = app.get_subcommands().front()->get_name();
    smallscat::app::CommandOptions opts{out_dir, timing};
    return smallscat::app::run_command_with_config(command, config, opts, std::cout, std::cerr);
}
