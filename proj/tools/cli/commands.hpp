// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "run_config.hpp"

namespace licsctl {

/// Command-line flags that override or complement the config file.
struct RunOptions {
    unsigned workers = 0;  // 0: hardware concurrency
    std::optional<std::string> out_dir;
    bool permit_partial = false;
    std::optional<std::uint64_t> seed;
};

std::filesystem::path output_directory(const RunConfig& cfg, const RunOptions& opts);

void cmd_simulate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
void cmd_sweep(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
void cmd_optimize(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
void cmd_presets(std::ostream& out);

/// The simulate config that reproduces an optimum: explicit scenario with the
/// best parameters applied and final-state-only output.
RunConfig optimum_echo(const RunConfig& cfg, const lics_scenario& best,
                       const std::filesystem::path& out_dir);

/// Exit code contract: 0 success, 2 config or validation, 3 numerical failure.
int exit_code(const std::exception& e);

}  // namespace licsctl
