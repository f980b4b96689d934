// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

// Random scenario generators for the property tests.

#pragma once

#include <cmath>
#include <random>

#include "lics/scenarios.hpp"

namespace lics::testing {

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    /// Random normalized (a_m, a_n, a_f).
    AmplitudeState unit_state() {
        std::normal_distribution<double> n;
        AmplitudeState s;
        s.a_m = {n(rng_), n(rng_)};
        s.a_n = {n(rng_), n(rng_)};
        s.a_f = {n(rng_), n(rng_)};
        const double norm = std::sqrt(s.bound_population());
        s.a_m /= norm;
        s.a_n /= norm;
        s.a_f /= norm;
        return s;
    }

    PulseSchedule schedule(double max_coupling = 10.0) {
        PulseSchedule s;
        s.g_mn0 = uniform(0.0, max_coupling);
        s.g_nn0 = uniform(0.0, max_coupling);
        s.g_ff0 = uniform(0.0, max_coupling);
        s.delta2 = uniform(-4.0, 4.0);
        s.delta3 = uniform(-4.0, 4.0);
        s.d2 = uniform(0.5, 2.0);
        s.d3 = uniform(0.5, 2.0);
        return s;
    }

    /// Lossless parameters: eta = 0, delta_nf = 0, random Fano parameters and delta_mn.
    SystemParams lossless_params() {
        SystemParams p;
        p.q_nn = uniform(-10.0, 10.0);
        p.q_ff = uniform(-10.0, 10.0);
        p.q_nf = uniform(-10.0, 10.0);
        p.delta_mn = uniform(-3.0, 3.0);
        return p;
    }

    InstantCouplings constant_couplings(double max_coupling = 3.0) {
        InstantCouplings c;
        c.g_mn = uniform(0.0, max_coupling);
        c.g_nn = uniform(0.0, max_coupling);
        c.g_ff = uniform(0.0, max_coupling);
        c.g_nf = std::sqrt(c.g_nn * c.g_ff) * uniform(0.0, 1.0);
        return c;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace lics::testing
