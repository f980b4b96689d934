// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lics/scenarios.hpp"

namespace lics {

/// One- or two-dimensional grid of final (or time-sampled) observables.
/// axis2 may be the time pseudo-axis "T", in which case each axis1 value is a
/// single integration sampled at the axis2 times.
struct SweepSpec {
    Scenario base;
    Axis axis1;
    std::optional<Axis> axis2;
    std::vector<Observable> observables;
    bool permit_partial = false;
};

/// Throws InvalidArgument before any integration if the spec is malformed.
void validate(const SweepSpec& spec);

struct FailedCell {
    std::size_t i = 0;
    std::size_t j = 0;
    std::string message;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<double> axis1_values;
    std::vector<double> axis2_values;  ///< empty for a 1D sweep
    std::size_t rows = 0;
    std::size_t cols = 0;  ///< 1 for a 1D sweep
    /// Row-major [axis1][axis2] matrices, one per requested observable.
    std::map<Observable, std::vector<double>> matrices;
    std::vector<FailedCell> failed;  ///< those cells are NaN
    double wall_seconds = 0.0;

    double at(Observable o, std::size_t i, std::size_t j = 0) const {
        return matrices.at(o)[i * cols + j];
    }
};

/// Scenario for grid point (i, j). For a time axis, j is ignored.
Scenario cell_scenario(const SweepSpec& spec, double axis1_value,
                       std::optional<double> axis2_value);

/// Runs every cell on `workers` threads (0 means hardware concurrency). Output is
/// position-addressed, so matrices are bitwise identical for any worker count.
/// Failed cells raise NumericalFailure unless permit_partial is set.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers);

}  // namespace lics
