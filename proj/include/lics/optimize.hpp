// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lics/scenarios.hpp"

namespace lics {

struct Target {
    Observable which = Observable::W;  ///< pop_m, pop_n, pop_f or W
    double value = 0.0;                ///< in [0, 1]
    double weight = 1.0;               ///< > 0
};

struct FreeParameter {
    std::string path;
    double min = 0.0;
    double max = 0.0;
};

/// Weighted least-squares distance of the final observables from the targets,
/// minimized over a box of free scenario parameters.
struct Objective {
    Scenario base;
    std::vector<Target> targets;
    std::vector<FreeParameter> free;
    /// Optional first start point (inside the box), tried before the
    /// Latin-hypercube starts.
    std::optional<std::vector<double>> initial;

    double score(const Observables& achieved) const;
    Scenario apply(std::span<const double> x) const;
};

void validate(const Objective& objective);

/// Smallest accepted evaluation budget: number of free parameters + 2.
std::size_t minimum_budget(const Objective& objective);

struct StartReport {
    std::vector<double> start;
    std::vector<double> best;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::string error;  ///< non-empty when every evaluation of the start failed
};

struct OptimizeResult {
    std::vector<double> best;
    Observables achieved;
    double objective = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<double> trace;  ///< best-so-far objective after each evaluation
    std::vector<StartReport> starts;
};

/// Multi-start bounded Nelder-Mead. Start points are a Latin hypercube over the
/// box (count derived from the budget), preceded by `objective.initial` if set.
/// Each start is refined until the simplex objective spread drops below 1e-8 or
/// its share of the budget runs out. Deterministic for a given seed, for any
/// worker count. Throws NumericalFailure if every start fails to integrate.
OptimizeResult optimize(const Objective& objective, std::size_t budget, std::uint64_t seed,
                        unsigned workers = 1);

}  // namespace lics
