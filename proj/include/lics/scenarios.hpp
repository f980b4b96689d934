// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lics/dynamics.hpp"
#include "lics/pulses.hpp"

namespace lics {

/// Everything needed for one integration.
struct Scenario {
    PulseSchedule schedule;
    SystemParams params;
    /// Starts in the ground state |m>.
    AmplitudeState init{.a_m = 1.0};
    IntegratorConfig integrator;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Observable { pop_m, pop_n, pop_f, W, sum_total };

std::string_view to_string(Observable o);
/// Throws InvalidArgument for unknown names.
Observable parse_observable(std::string_view name);
inline constexpr std::array<Observable, 5> kAllObservables = {
    Observable::pop_m, Observable::pop_n, Observable::pop_f, Observable::W,
    Observable::sum_total};

/// Final-state observables of one run.
struct Observables {
    double pop_m = 0.0;
    double pop_n = 0.0;
    double pop_f = 0.0;
    double W = 0.0;
    double sum_total = 0.0;

    double get(Observable o) const;
    static Observables from(const AmplitudeState& s);

    friend bool operator==(const Observables&, const Observables&) = default;
};

// Scalar parameter paths, e.g. "schedule.delta3" or "params.q_nf". Setting
// "schedule.g_nf0" switches the cross coupling from automatic to explicit.

/// Sweep axis pseudo-path sampling the trajectory in time instead of changing
/// a parameter.
inline constexpr std::string_view kTimeAxis = "T";

bool is_parameter_path(std::string_view path);
std::vector<std::string> parameter_paths();
double get_parameter(const Scenario& scenario, std::string_view path);
void set_parameter(Scenario& scenario, std::string_view path, double value);

/// Validates every part of the scenario (schedule, params, integrator, init).
void validate(const Scenario& scenario);

/// Scenario window widened so every enabled pulse has 4 durations of margin.
Scenario with_covering_window(Scenario scenario);

/// Integrates with the covering window and returns the final observables.
Observables evaluate(const Scenario& scenario);

struct Axis {
    std::string path;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    /// Inclusive linspace; the last value is exactly `max`.
    std::vector<double> values() const;

    friend bool operator==(const Axis&, const Axis&) = default;
};

/// The axes a preset's figure is drawn over.
struct SweepDescriptor {
    Axis axis1;
    std::optional<Axis> axis2;
    std::vector<Observable> observables;
};

struct ScenarioPreset {
    std::string name;
    std::string description;
    Scenario scenario;
    std::optional<SweepDescriptor> swept;
};

std::vector<std::string> preset_names();
/// Throws InvalidArgument listing the available names when `name` is unknown.
ScenarioPreset preset(std::string_view name);

using AmplitudeVector = std::array<cplx, 3>;  // (a_m, a_n, a_f)

/// Exact solution of the amplitude equations with couplings frozen at `c`,
/// propagated by time T from `init`. Uses the eigendecomposition of the 3x3
/// coefficient matrix; falls back to a divided-difference (Putzer) form of the
/// exponential when the eigenvector basis is ill-conditioned or defective.
AmplitudeVector constant_coefficient_solution(const InstantCouplings& c,
                                              const SystemParams& params,
                                              const AmplitudeVector& init, double T);

/// The same exponential computed only by the Putzer route. Exposed so the two
/// routes can be tested against each other.
AmplitudeVector constant_coefficient_solution_putzer(const InstantCouplings& c,
                                                     const SystemParams& params,
                                                     const AmplitudeVector& init, double T);

/// Two-pulse transfer n -> f through the continuum: E1 off, a_n = 1 initially.
/// `base` supplies couplings, durations and system params; delta3 is replaced.
struct TransferOutcome {
    double pop_n = 0.0;
    double pop_f = 0.0;
    double W = 0.0;
};
TransferOutcome two_pulse_lics(const Scenario& base, double delta3);

}  // namespace lics
