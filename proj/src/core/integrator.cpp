// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

// Dormand-Prince 5(4) with FSAL and step landing on output times.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "lics/dynamics.hpp"
#include "lics/errors.hpp"

namespace lics {

namespace {

constexpr std::size_t kDim = 7;
using Vec = std::array<double, kDim>;

constexpr double kMinStep = 1e-12;

// Butcher tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

Vec pack(const AmplitudeState& s) {
    return {s.a_m.real(), s.a_m.imag(), s.a_n.real(), s.a_n.imag(),
            s.a_f.real(), s.a_f.imag(), s.W};
}

AmplitudeState unpack(const Vec& y, double T) {
    AmplitudeState s;
    s.a_m = {y[0], y[1]};
    s.a_n = {y[2], y[3]};
    s.a_f = {y[4], y[5]};
    s.W = y[6];
    s.T = T;
    return s;
}

// Same equations as lics::rhs without the finiteness checks; trial stages of
// a rejected step may legitimately overflow.
template <class Couplings>
struct System {
    const Couplings& couplings;
    const SystemParams& p;

    void operator()(double T, const Vec& y, Vec& dy) const {
        const InstantCouplings c = couplings(T);
        const cplx am{y[0], y[1]}, an{y[2], y[3]}, af{y[4], y[5]};
        const cplx cross = c.g_nf * cplx{1.0, p.q_nf};
        constexpr cplx I{0.0, 1.0};

        const cplx dm = -I * c.g_mn * an - cplx{p.eta_m, p.delta_mn - p.delta_nf} * am;
        const cplx dn = -I * c.g_mn * am - cross * af -
                        cplx{p.eta_n + c.g_nn, p.delta_nf + p.q_nn * c.g_nn} * an;
        const cplx df = -cross * an - cplx{p.eta_f + c.g_ff, p.q_ff * c.g_ff} * af;
        dy = {dm.real(), dm.imag(), dn.real(), dn.imag(), df.real(), df.imag(),
              2.0 * (c.g_nn * std::norm(an) + c.g_ff * std::norm(af) +
                     2.0 * c.g_nf * (an * std::conj(af)).real())};
    }
};

template <class Couplings>
Trajectory run(const Couplings& couplings, const SystemParams& params,
               const AmplitudeState& init, const IntegratorConfig& cfg,
               const OutputGrid& grid) {
    validate(params);
    validate(cfg);
    if (init.bound_population() > 1.0 + 1e-12 || !std::isfinite(init.total()) || init.W < 0.0)
        throw InvalidArgument("initial state must be finite and (sub-)normalized");

    const std::vector<double> outputs = grid.resolve(cfg);
    const System<Couplings> f{couplings, params};

    Trajectory traj;
    traj.samples.reserve(outputs.size());

    double t = cfg.t_start;
    Vec y = pack(init);
    std::size_t next_out = 0;
    while (next_out < outputs.size() && outputs[next_out] <= t) {
        traj.samples.push_back(unpack(y, outputs[next_out]));
        ++next_out;
    }

    Vec k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
    f(t, y, k1);

    double h = std::min(cfg.max_step, 0.01 * (cfg.t_end - cfg.t_start));
    while (next_out < outputs.size()) {
        const double target = outputs[next_out];
        bool landing = false;
        double step = std::min(h, cfg.max_step);
        if (t + step >= target) {
            step = target - t;
            landing = true;
        }

        for (std::size_t i = 0; i < kDim; ++i) tmp[i] = y[i] + step * a21 * k1[i];
        f(t + c2 * step, tmp, k2);
        for (std::size_t i = 0; i < kDim; ++i)
            tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * step, tmp, k3);
        for (std::size_t i = 0; i < kDim; ++i)
            tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * step, tmp, k4);
        for (std::size_t i = 0; i < kDim; ++i)
            tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * step, tmp, k5);
        for (std::size_t i = 0; i < kDim; ++i)
            tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                    a65 * k5[i]);
        const double t_new = landing ? target : t + step;
        f(t_new, tmp, k6);
        for (std::size_t i = 0; i < kDim; ++i)
            ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                     b6 * k6[i]);
        f(t_new, ynew, k7);

        // Error measured on |a_j| rather than on real and imaginary parts, so a
        // global phase rotation of the initial state gives the same steps.
        double err = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t re = 2 * j;
            const bool complex_component = j < 3;
            auto local = [&](std::size_t i) {
                return step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
            };
            double e, before, after;
            if (complex_component) {
                e = std::hypot(local(re), local(re + 1));
                before = std::hypot(y[re], y[re + 1]);
                after = std::hypot(ynew[re], ynew[re + 1]);
            } else {
                e = std::abs(local(6));
                before = std::abs(y[6]);
                after = std::abs(ynew[6]);
            }
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(before, after);
            err += (e / scale) * (e / scale);
        }
        err = std::sqrt(err / 4.0);

        if (!std::isfinite(err)) {
            ++traj.rejected_steps;
            h = 0.2 * step;
        } else if (err <= 1.0) {
            ++traj.accepted_steps;
            t = t_new;
            y = ynew;
            k1 = k7;
            while (next_out < outputs.size() && outputs[next_out] <= t) {
                traj.samples.push_back(unpack(y, outputs[next_out]));
                ++next_out;
            }
            const double grow =
                err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // A landing step was clipped; don't let it shrink the controller's step.
            h = landing ? std::max(h, step * grow) : step * grow;
            continue;
        } else {
            ++traj.rejected_steps;
            h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        }

        if (traj.accepted_steps + traj.rejected_steps >= cfg.max_steps) {
            std::ostringstream msg;
            msg << "stiffness failure: step budget of " << cfg.max_steps
                << " exhausted at T = " << t << " with step " << h;
            throw NumericalFailure(msg.str(), t);
        }
        if (h < kMinStep) {
            std::ostringstream msg;
            msg << "stiffness failure: step size fell below " << kMinStep << " at T = " << t;
            throw NumericalFailure(msg.str(), t);
        }
    }
    return traj;
}

}  // namespace

OutputGrid OutputGrid::uniform(std::size_t count) {
    if (count < 2) throw InvalidArgument("uniform output grid needs at least 2 samples");
    OutputGrid g;
    g.uniform_count_ = count;
    return g;
}

OutputGrid OutputGrid::at(std::vector<double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i])) throw InvalidArgument("output time is not finite");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw InvalidArgument("output times must be strictly ascending");
    }
    OutputGrid g;
    g.times_ = std::move(times);
    return g;
}

std::vector<double> OutputGrid::resolve(const IntegratorConfig& cfg) const {
    std::vector<double> out;
    if (uniform_count_ > 0) {
        out.resize(uniform_count_);
        const double span = cfg.t_end - cfg.t_start;
        for (std::size_t i = 0; i < uniform_count_; ++i)
            out[i] = cfg.t_start + span * static_cast<double>(i) /
                                       static_cast<double>(uniform_count_ - 1);
        out.back() = cfg.t_end;
        return out;
    }
    out = times_;
    if (!out.empty() && (out.front() < cfg.t_start || out.back() > cfg.t_end)) {
        std::ostringstream msg;
        msg << "output times must lie inside the window [" << cfg.t_start << ", " << cfg.t_end
            << "]";
        throw InvalidArgument(msg.str());
    }
    if (out.empty() || out.back() < cfg.t_end) out.push_back(cfg.t_end);
    return out;
}

Trajectory integrate(const PulseSchedule& schedule, const SystemParams& params,
                     const AmplitudeState& init, const IntegratorConfig& cfg,
                     const OutputGrid& grid) {
    validate(schedule);
    auto fn = [&schedule](double T) { return couplings_at(schedule, T); };
    Trajectory traj = run(fn, params, init, cfg, grid);
    traj.warnings = window_warnings(cfg, schedule);
    return traj;
}

Trajectory integrate(const InstantCouplings& constant, const SystemParams& params,
                     const AmplitudeState& init, const IntegratorConfig& cfg,
                     const OutputGrid& grid) {
    for (double g : {constant.g_mn, constant.g_nn, constant.g_ff, constant.g_nf}) {
        if (!std::isfinite(g) || g < 0.0)
            throw InvalidArgument("constant couplings must be finite and non-negative");
    }
    auto fn = [&constant](double) { return constant; };
    return run(fn, params, init, cfg, grid);
}

Trajectory integrate(const CouplingFunction& couplings, const SystemParams& params,
                     const AmplitudeState& init, const IntegratorConfig& cfg,
                     const OutputGrid& grid) {
    if (!couplings) throw InvalidArgument("empty coupling function");
    return run(couplings, params, init, cfg, grid);
}

}  // namespace lics
