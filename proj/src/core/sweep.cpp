// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "lics/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "lics/errors.hpp"

namespace lics {

namespace {

bool is_time_axis(const Axis& a) { return a.path == kTimeAxis; }

}  // namespace

void validate(const SweepSpec& spec) {
    if (spec.observables.empty()) throw InvalidArgument("no observables requested");
    validate(spec.base);
    if (is_time_axis(spec.axis1))
        throw InvalidArgument("the time axis 'T' may only be used as axis2");
    (void)get_parameter(spec.base, spec.axis1.path);
    (void)spec.axis1.values();
    if (spec.axis2) {
        if (!is_time_axis(*spec.axis2)) (void)get_parameter(spec.base, spec.axis2->path);
        (void)spec.axis2->values();
    }
    // Every cell's parameters must be physically valid too; checking the
    // corners is enough since the constraints are all box constraints.
    const auto v1 = spec.axis1.values();
    for (double x : {v1.front(), v1.back()}) {
        if (spec.axis2 && !is_time_axis(*spec.axis2)) {
            const auto v2 = spec.axis2->values();
            for (double y : {v2.front(), v2.back()}) validate(cell_scenario(spec, x, y));
        } else {
            validate(cell_scenario(spec, x, std::nullopt));
        }
    }
}

Scenario cell_scenario(const SweepSpec& spec, double axis1_value,
                       std::optional<double> axis2_value) {
    Scenario s = spec.base;
    set_parameter(s, spec.axis1.path, axis1_value);
    if (spec.axis2 && !is_time_axis(*spec.axis2)) {
        if (!axis2_value) throw InvalidArgument("cell_scenario: missing axis2 value");
        set_parameter(s, spec.axis2->path, *axis2_value);
    }
    s = with_covering_window(s);
    if (spec.axis2 && is_time_axis(*spec.axis2)) {
        s.integrator.t_start = std::min(s.integrator.t_start, std::min(spec.axis2->min, spec.axis2->max));
        s.integrator.t_end = std::max(s.integrator.t_end, std::max(spec.axis2->min, spec.axis2->max));
    }
    return s;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
    validate(spec);
    const auto start_clock = std::chrono::steady_clock::now();

    SweepResult result;
    result.spec = spec;
    result.axis1_values = spec.axis1.values();
    const bool time_axis = spec.axis2 && is_time_axis(*spec.axis2);
    if (spec.axis2) result.axis2_values = spec.axis2->values();
    result.rows = result.axis1_values.size();
    result.cols = spec.axis2 ? result.axis2_values.size() : 1;

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (Observable o : spec.observables)
        result.matrices[o].assign(result.rows * result.cols, nan);

    // A task is one integration: a whole row for a time axis, else one cell.
    const std::size_t tasks = time_axis ? result.rows : result.rows * result.cols;
    std::vector<std::string> errors(tasks);

    // Sample times for a time axis: unique ascending values (a degenerate axis
    // repeats one time), mapped back to columns afterwards.
    std::vector<double> sample_times;
    if (time_axis) {
        sample_times = result.axis2_values;
        std::sort(sample_times.begin(), sample_times.end());
        sample_times.erase(std::unique(sample_times.begin(), sample_times.end()),
                           sample_times.end());
    }

    auto write = [&](std::size_t i, std::size_t j, const AmplitudeState& st) {
        const Observables obs = Observables::from(st);
        for (Observable o : spec.observables)
            result.matrices[o][i * result.cols + j] = obs.get(o);
    };

    auto run_task = [&](std::size_t task) {
        try {
            if (time_axis) {
                const Scenario s = cell_scenario(spec, result.axis1_values[task], std::nullopt);
                const Trajectory traj = integrate(s.schedule, s.params, s.init, s.integrator,
                                                  OutputGrid::at(sample_times));
                for (std::size_t j = 0; j < result.cols; ++j) {
                    const double t = result.axis2_values[j];
                    auto it = std::find_if(traj.samples.begin(), traj.samples.end(),
                                           [t](const AmplitudeState& st) { return st.T == t; });
                    write(task, j, *it);
                }
            } else {
                const std::size_t i = task / result.cols, j = task % result.cols;
                std::optional<double> y;
                if (spec.axis2) y = result.axis2_values[j];
                const Scenario s = cell_scenario(spec, result.axis1_values[i], y);
                write(i, j,
                      integrate(s.schedule, s.params, s.init, s.integrator).final_state());
            }
        } catch (const std::exception& e) {
            errors[task] = e.what();
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));

    // Static block partition; each task writes only its own slots.
    std::vector<std::jthread> pool;
    const std::size_t block = (tasks + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * block, hi = std::min(tasks, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t t = lo; t < hi; ++t) run_task(t);
        });
    }
    pool.clear();

    for (std::size_t task = 0; task < tasks; ++task) {
        if (errors[task].empty()) continue;
        if (time_axis) {
            for (std::size_t j = 0; j < result.cols; ++j)
                result.failed.push_back({task, j, errors[task]});
        } else {
            result.failed.push_back({task / result.cols, task % result.cols, errors[task]});
        }
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_clock).count();

    if (!result.failed.empty() && !spec.permit_partial) {
        std::ostringstream msg;
        msg << result.failed.size() << " sweep cell(s) failed; first at (" << result.failed[0].i
            << ", " << result.failed[0].j << "): " << result.failed[0].message;
        throw NumericalFailure(msg.str(), std::nan(""));
    }
    return result;
}

}  // namespace lics
