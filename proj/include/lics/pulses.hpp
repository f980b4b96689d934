// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

namespace lics {

/// Instantaneous dimensionless couplings at one time point. All non-negative.
struct InstantCouplings {
    double g_mn = 0.0;  ///< bound-bound Rabi coupling m-n (pulse E1)
    double g_nn = 0.0;  ///< light-induced width of n through the continuum (pulse E2)
    double g_ff = 0.0;  ///< light-induced width of f through the continuum (pulse E3)
    double g_nf = 0.0;  ///< cross width n-f through the shared continuum
};

/// Three Gaussian pulses. Time is measured in units of the E1 half-duration,
/// with E1 peaking at T = 0.
///
///   g_mn(T) = g_mn0 exp(-T^2/2)
///   g_nn(T) = g_nn0 exp(-(T - delta2)^2 / d2^2)
///   g_ff(T) = g_ff0 exp(-(T - delta3)^2 / d3^2)
///   g_nf(T) = g_nf0 exp(-(T - delta2)^2 / 2 d2^2) exp(-(T - delta3)^2 / 2 d3^2)
///
/// When g_nf0 is unset the cross coupling is the geometric mean sqrt(g_nn g_ff).
struct PulseSchedule {
    double g_mn0 = 0.0;
    double g_nn0 = 0.0;
    double g_ff0 = 0.0;
    std::optional<double> g_nf0;  ///< nullopt: automatic (geometric mean)
    double delta2 = 0.0;
    double delta3 = 0.0;
    double d2 = 1.0;
    double d3 = 1.0;
    bool e1_enabled = true;
    bool e2_enabled = true;
    bool e3_enabled = true;

    bool cross_auto() const noexcept { return !g_nf0.has_value(); }

    friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

/// Throws InvalidArgument on non-finite or negative peaks, non-positive
/// durations, or an explicit g_nf0 above sqrt(g_nn0 g_ff0).
void validate(const PulseSchedule& schedule);

/// Peak value of the cross coupling amplitude (the automatic value when unset).
/// Zero if E2 or E3 is disabled.
double peak_cross_coupling(const PulseSchedule& schedule);

InstantCouplings couplings_at(const PulseSchedule& schedule, double T);

}  // namespace lics
