// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "lics/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lics/errors.hpp"

namespace lics {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " is not finite");
}

void require_finite(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InvalidArgument(std::string(what) + " is not finite");
}

}  // namespace

void validate(const SystemParams& p) {
    const std::pair<double, const char*> rates[] = {
        {p.eta_m, "eta_m"}, {p.eta_n, "eta_n"}, {p.eta_f, "eta_f"}};
    for (auto [v, name] : rates) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidArgument(std::string("system params: ") + name +
                                  " must be finite and non-negative");
    }
    const std::pair<double, const char*> others[] = {{p.delta_mn, "delta_mn"},
                                                     {p.delta_nf, "delta_nf"},
                                                     {p.q_nn, "q_nn"},
                                                     {p.q_ff, "q_ff"},
                                                     {p.q_nf, "q_nf"}};
    for (auto [v, name] : others) {
        if (!std::isfinite(v))
            throw InvalidArgument(std::string("system params: ") + name + " must be finite");
    }
}

Derivative rhs(const AmplitudeState& s, const InstantCouplings& c, const SystemParams& p) {
    require_finite(s.a_m, "amplitude a_m");
    require_finite(s.a_n, "amplitude a_n");
    require_finite(s.a_f, "amplitude a_f");
    require_finite(c.g_mn, "coupling g_mn");
    require_finite(c.g_nn, "coupling g_nn");
    require_finite(c.g_ff, "coupling g_ff");
    require_finite(c.g_nf, "coupling g_nf");

    constexpr cplx I{0.0, 1.0};
    const cplx cross = c.g_nf * cplx{1.0, p.q_nf};

    Derivative d;
    d.da_m = -I * c.g_mn * s.a_n - cplx{p.eta_m, p.delta_mn - p.delta_nf} * s.a_m;
    d.da_n = -I * c.g_mn * s.a_m - cross * s.a_f -
             cplx{p.eta_n + c.g_nn, p.delta_nf + p.q_nn * c.g_nn} * s.a_n;
    d.da_f = -cross * s.a_n - cplx{p.eta_f + c.g_ff, p.q_ff * c.g_ff} * s.a_f;
    d.dW = 2.0 * (c.g_nn * std::norm(s.a_n) + c.g_ff * std::norm(s.a_f) +
                  2.0 * c.g_nf * (s.a_n * std::conj(s.a_f)).real());
    return d;
}

void validate(const IntegratorConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !std::isfinite(cfg.rel_tol))
        throw InvalidArgument("integrator: rel_tol must be positive");
    if (!(cfg.abs_tol > 0.0) || !std::isfinite(cfg.abs_tol))
        throw InvalidArgument("integrator: abs_tol must be positive");
    if (!(cfg.max_step > 0.0) || !std::isfinite(cfg.max_step))
        throw InvalidArgument("integrator: max_step must be positive");
    if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end) || !(cfg.t_start < cfg.t_end))
        throw InvalidArgument("integrator: need finite t_start < t_end");
    if (cfg.max_steps == 0) throw InvalidArgument("integrator: max_steps must be positive");
}

double conservation_slack(const IntegratorConfig& cfg) {
    constexpr double default_rel_tol = 1e-8;
    return 1e-6 * std::max(1.0, cfg.rel_tol / default_rel_tol);
}

namespace {

struct PulseExtent {
    const char* name;
    double peak;
    double duration;
};

std::vector<PulseExtent> enabled_pulses(const PulseSchedule& s) {
    std::vector<PulseExtent> out;
    if (s.e1_enabled && s.g_mn0 > 0.0) out.push_back({"E1", 0.0, 1.0});
    if (s.e2_enabled && s.g_nn0 > 0.0) out.push_back({"E2", s.delta2, s.d2});
    if (s.e3_enabled && s.g_ff0 > 0.0) out.push_back({"E3", s.delta3, s.d3});
    return out;
}

}  // namespace

std::vector<std::string> window_warnings(const IntegratorConfig& cfg,
                                         const PulseSchedule& schedule, double margin) {
    std::vector<std::string> out;
    for (const auto& p : enabled_pulses(schedule)) {
        const double lo = p.peak - margin * p.duration;
        const double hi = p.peak + margin * p.duration;
        if (lo < cfg.t_start || hi > cfg.t_end) {
            std::ostringstream msg;
            msg << "window [" << cfg.t_start << ", " << cfg.t_end << "] does not cover pulse "
                << p.name << " over [" << lo << ", " << hi << "]";
            out.push_back(msg.str());
        }
    }
    return out;
}

IntegratorConfig covering_window(IntegratorConfig cfg, const PulseSchedule& schedule,
                                 double margin) {
    for (const auto& p : enabled_pulses(schedule)) {
        cfg.t_start = std::min(cfg.t_start, p.peak - margin * p.duration);
        cfg.t_end = std::max(cfg.t_end, p.peak + margin * p.duration);
    }
    return cfg;
}

ScaledParams scale_to_dimensionless(const DimensionalParams& d) {
    if (!(d.tau > 0.0) || !std::isfinite(d.tau))
        throw InvalidArgument("scale_to_dimensionless: tau must be positive");
    const double all[] = {d.gamma_m, d.gamma_n,  d.gamma_f,  d.Omega_mn, d.Omega_nf,
                          d.gamma_nn, d.gamma_ff, d.gamma_nf, d.G_mn};
    for (double v : all) {
        if (!std::isfinite(v)) throw InvalidArgument("scale_to_dimensionless: non-finite rate");
    }

    ScaledParams out;
    out.params.eta_m = d.gamma_m * d.tau;
    out.params.eta_n = d.gamma_n * d.tau;
    out.params.eta_f = d.gamma_f * d.tau;
    out.params.delta_mn = d.Omega_mn * d.tau;
    out.params.delta_nf = d.Omega_nf * d.tau;
    out.peaks.g_mn = d.G_mn * d.tau;
    out.peaks.g_nn = d.gamma_nn * d.tau;
    out.peaks.g_ff = d.gamma_ff * d.tau;
    out.peaks.g_nf = d.gamma_nf * d.tau;
    return out;
}

}  // namespace lics
