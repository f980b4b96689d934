// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "lics/pulses.hpp"

#include <cmath>
#include <string>

#include "lics/errors.hpp"

namespace lics {

namespace {

void require_peak(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0)
        throw InvalidArgument(std::string("pulse schedule: ") + name +
                              " must be finite and non-negative");
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value))
        throw InvalidArgument(std::string("pulse schedule: ") + name + " must be finite");
}

}  // namespace

void validate(const PulseSchedule& s) {
    require_peak(s.g_mn0, "g_mn0");
    require_peak(s.g_nn0, "g_nn0");
    require_peak(s.g_ff0, "g_ff0");
    require_finite(s.delta2, "delta2");
    require_finite(s.delta3, "delta3");
    if (!(s.d2 > 0.0) || !std::isfinite(s.d2))
        throw InvalidArgument("pulse schedule: d2 must be positive");
    if (!(s.d3 > 0.0) || !std::isfinite(s.d3))
        throw InvalidArgument("pulse schedule: d3 must be positive");
    if (s.g_nf0) {
        require_peak(*s.g_nf0, "g_nf0");
        const double bound = std::sqrt(s.g_nn0 * s.g_ff0);
        if (*s.g_nf0 > bound * (1.0 + 1e-12))
            throw InvalidArgument("pulse schedule: g_nf0 = " + std::to_string(*s.g_nf0) +
                                  " exceeds sqrt(g_nn0*g_ff0) = " + std::to_string(bound));
    }
}

double peak_cross_coupling(const PulseSchedule& s) {
    if (!s.e2_enabled || !s.e3_enabled) return 0.0;
    return s.g_nf0 ? *s.g_nf0 : std::sqrt(s.g_nn0 * s.g_ff0);
}

InstantCouplings couplings_at(const PulseSchedule& s, double T) {
    if (!(s.d2 > 0.0) || !(s.d3 > 0.0))
        throw InvalidArgument("pulse schedule: durations d2, d3 must be positive");

    InstantCouplings c;
    if (s.e1_enabled) c.g_mn = s.g_mn0 * std::exp(-0.5 * T * T);

    const double x2 = (T - s.delta2) / s.d2;
    const double x3 = (T - s.delta3) / s.d3;
    if (s.e2_enabled) c.g_nn = s.g_nn0 * std::exp(-x2 * x2);
    if (s.e3_enabled) c.g_ff = s.g_ff0 * std::exp(-x3 * x3);

    if (s.e2_enabled && s.e3_enabled) {
        if (s.cross_auto())
            c.g_nf = std::sqrt(c.g_nn * c.g_ff);
        else
            c.g_nf = *s.g_nf0 * std::exp(-0.5 * (x2 * x2 + x3 * x3));
    }
    return c;
}

}  // namespace lics
