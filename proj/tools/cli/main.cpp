// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct CommandFlags {
    std::string config;
    unsigned workers = 0;
    std::string out;
    bool permit_partial = false;
    std::uint64_t seed = 0;
};

CLI::App* add_run_command(CLI::App& app, const std::string& name, const std::string& help,
                          CommandFlags& flags) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", flags.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--workers", flags.workers, "Worker threads (0: all hardware threads)");
    cmd->add_option("--out", flags.out, "Output directory, overriding output.directory");
    cmd->add_flag("--permit-partial", flags.permit_partial,
                  "Keep going when sweep cells fail, marking them nan");
    cmd->add_option("--seed", flags.seed, "Optimizer seed, overriding optimize.seed");
    return cmd;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-pulse LICS photodissociation simulator and pulse-schedule optimizer",
                 "licsctl"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lics_version());

    CommandFlags flags;
    auto* simulate = add_run_command(app, "simulate", "Integrate one scenario", flags);
    auto* sweep = add_run_command(app, "sweep", "Scan one or two parameters", flags);
    auto* optimize = add_run_command(app, "optimize", "Search for a pulse schedule", flags);
    auto* presets = app.add_subcommand("presets", "List scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (presets->parsed()) {
        licsctl::cmd_presets(std::cout);
        return 0;
    }

    try {
        const licsctl::RunConfig cfg = licsctl::load_config(flags.config);
        licsctl::RunOptions opts;
        opts.workers = flags.workers;
        if (!flags.out.empty()) opts.out_dir = flags.out;
        opts.permit_partial = flags.permit_partial;
        if (optimize->count("--seed")) opts.seed = flags.seed;

        if (simulate->parsed()) licsctl::cmd_simulate(cfg, opts, std::cout);
        else if (sweep->parsed()) licsctl::cmd_sweep(cfg, opts, std::cout);
        else licsctl::cmd_optimize(cfg, opts, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "licsctl: error: " << e.what() << '\n';
        return licsctl::exit_code(e);
    }
    return 0;
}
