// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lics/pulses.hpp"

namespace lics {

using cplx = std::complex<double>;

/// Slowly varying amplitudes of levels m, n, f plus the energy-integrated
/// continuum population W accumulated up to time T.
struct AmplitudeState {
    cplx a_m{};
    cplx a_n{};
    cplx a_f{};
    double W = 0.0;
    double T = 0.0;

    double pop_m() const { return std::norm(a_m); }
    double pop_n() const { return std::norm(a_n); }
    double pop_f() const { return std::norm(a_f); }
    /// |a_m|^2 + |a_n|^2 + |a_f|^2
    double bound_population() const { return pop_m() + pop_n() + pop_f(); }
    /// Bound population plus W; stays at 1 for a closed, lossless system.
    double total() const { return bound_population() + W; }

    friend bool operator==(const AmplitudeState&, const AmplitudeState&) = default;
};

/// Dimensionless system constants. Rates and detunings are in units of the
/// inverse E1 half-duration; q_* are effective Fano parameters (shift / width).
struct SystemParams {
    double eta_m = 0.0;
    double eta_n = 0.0;
    double eta_f = 0.0;
    double delta_mn = 0.0;  ///< one-photon detuning
    double delta_nf = 0.0;  ///< two-photon detuning n-f through the continuum
    double q_nn = 0.0;
    double q_ff = 0.0;
    double q_nf = 0.0;  ///< also used for q_fn (single non-degenerate continuum)

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

void validate(const SystemParams& params);

struct Derivative {
    cplx da_m{};
    cplx da_n{};
    cplx da_f{};
    double dW = 0.0;
};

/// Right-hand side of the reduced three-amplitude equations plus the yield rate
///
///   da_m/dT = -i g_mn a_n - [eta_m + i(D_mn - D_nf)] a_m
///   da_n/dT = -i g_mn a_m - g_nf (1 + i q_nf) a_f - [eta_n + g_nn + i(D_nf + q_nn g_nn)] a_n
///   da_f/dT = -g_nf (1 + i q_nf) a_n - (eta_f + g_ff + i q_ff g_ff) a_f
///   dW/dT   = 2 [g_nn |a_n|^2 + g_ff |a_f|^2 + 2 Re(g_nf a_n conj(a_f))]
///
/// With all eta = 0, dW/dT equals the rate of bound-population loss, so the
/// total |a|^2 + W is conserved for any detuning and any Fano parameters.
///
/// Throws InvalidArgument if an amplitude or coupling is not finite.
Derivative rhs(const AmplitudeState& state, const InstantCouplings& couplings,
               const SystemParams& params);

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.01;
    double t_start = -8.0;
    double t_end = 8.0;
    /// Accepted plus rejected steps allowed before giving up. A smoothly growing
    /// stiff coupling can pin the step just above the underflow floor indefinitely.
    std::uint64_t max_steps = 2'000'000;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

void validate(const IntegratorConfig& cfg);

/// Numerical slack allowed on |a|^2 + W: 1e-6 at the default tolerance, scaled
/// proportionally when the tolerance is loosened.
double conservation_slack(const IntegratorConfig& cfg);

/// Each enabled pulse must have `margin` durations of window on each side of its
/// peak. E1 has unit duration.
std::vector<std::string> window_warnings(const IntegratorConfig& cfg,
                                         const PulseSchedule& schedule,
                                         double margin = 4.0);

/// Widens [t_start, t_end] (never narrows) until window_warnings is empty.
IntegratorConfig covering_window(IntegratorConfig cfg, const PulseSchedule& schedule,
                                 double margin = 4.0);

/// Which times to record. The final state is always recorded.
class OutputGrid {
public:
    static OutputGrid final_only() { return OutputGrid{}; }
    /// `count` equally spaced samples over the whole window, endpoints included.
    static OutputGrid uniform(std::size_t count);
    /// Explicit ascending sample times inside the window.
    static OutputGrid at(std::vector<double> times);

    std::vector<double> resolve(const IntegratorConfig& cfg) const;

private:
    std::size_t uniform_count_ = 0;
    std::vector<double> times_;
};

struct Trajectory {
    std::vector<AmplitudeState> samples;  ///< ascending T, last one at t_end
    std::vector<std::string> warnings;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    const AmplitudeState& final_state() const { return samples.back(); }
};

using CouplingFunction = std::function<InstantCouplings(double)>;

/// Adaptive Dormand-Prince 5(4) integration of the seven real components
/// (three complex amplitudes and W). Steps land exactly on every requested
/// output time. Throws NumericalFailure if the step size collapses below 1e-12.
Trajectory integrate(const PulseSchedule& schedule, const SystemParams& params,
                     const AmplitudeState& init, const IntegratorConfig& cfg,
                     const OutputGrid& grid = OutputGrid::final_only());

/// Same integrator with time-independent couplings.
Trajectory integrate(const InstantCouplings& constant, const SystemParams& params,
                     const AmplitudeState& init, const IntegratorConfig& cfg,
                     const OutputGrid& grid = OutputGrid::final_only());

Trajectory integrate(const CouplingFunction& couplings, const SystemParams& params,
                     const AmplitudeState& init, const IntegratorConfig& cfg,
                     const OutputGrid& grid = OutputGrid::final_only());

/// Physical inputs: rates in s^-1, tau in s, detunings and G_mn in rad/s.
struct DimensionalParams {
    double gamma_m = 0.0;
    double gamma_n = 0.0;
    double gamma_f = 0.0;
    double tau = 0.0;
    double Omega_mn = 0.0;
    double Omega_nf = 0.0;
    double gamma_nn = 0.0;  ///< peak
    double gamma_ff = 0.0;  ///< peak
    double gamma_nf = 0.0;  ///< peak
    double G_mn = 0.0;      ///< peak
};

struct ScaledParams {
    SystemParams params;     ///< eta and detunings; Fano parameters left at 0
    InstantCouplings peaks;  ///< g_mn0, g_nn0, g_ff0, g_nf0
};

ScaledParams scale_to_dimensionless(const DimensionalParams& dimensional);

}  // namespace lics
