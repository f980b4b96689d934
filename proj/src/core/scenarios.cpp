// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "lics/scenarios.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "lics/errors.hpp"

namespace lics {

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::pop_m: return "pop_m";
        case Observable::pop_n: return "pop_n";
        case Observable::pop_f: return "pop_f";
        case Observable::W: return "W";
        case Observable::sum_total: return "sum_total";
    }
    return "?";
}

Observable parse_observable(std::string_view name) {
    for (Observable o : kAllObservables) {
        if (to_string(o) == name) return o;
    }
    throw InvalidArgument("unknown observable '" + std::string(name) +
                          "' (expected pop_m, pop_n, pop_f, W or sum_total)");
}

double Observables::get(Observable o) const {
    switch (o) {
        case Observable::pop_m: return pop_m;
        case Observable::pop_n: return pop_n;
        case Observable::pop_f: return pop_f;
        case Observable::W: return W;
        case Observable::sum_total: return sum_total;
    }
    return std::nan("");
}

Observables Observables::from(const AmplitudeState& s) {
    return {s.pop_m(), s.pop_n(), s.pop_f(), s.W, s.total()};
}

namespace {

struct ParameterAccess {
    std::function<double(const Scenario&)> get;
    std::function<void(Scenario&, double)> set;
};

template <class Part, Part Scenario::*part, double Part::*field>
ParameterAccess member() {
    return {[](const Scenario& s) { return s.*part.*field; },
            [](Scenario& s, double v) { s.*part.*field = v; }};
}

const std::map<std::string, ParameterAccess, std::less<>>& parameter_table() {
    static const std::map<std::string, ParameterAccess, std::less<>> table = {
        {"schedule.g_mn0", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::g_mn0>()},
        {"schedule.g_nn0", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::g_nn0>()},
        {"schedule.g_ff0", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::g_ff0>()},
        {"schedule.g_nf0",
         {[](const Scenario& s) {
              return s.schedule.g_nf0 ? *s.schedule.g_nf0
                                      : std::sqrt(s.schedule.g_nn0 * s.schedule.g_ff0);
          },
          [](Scenario& s, double v) { s.schedule.g_nf0 = v; }}},
        {"schedule.delta2", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::delta2>()},
        {"schedule.delta3", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::delta3>()},
        {"schedule.d2", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::d2>()},
        {"schedule.d3", member<PulseSchedule, &Scenario::schedule, &PulseSchedule::d3>()},
        {"params.eta_m", member<SystemParams, &Scenario::params, &SystemParams::eta_m>()},
        {"params.eta_n", member<SystemParams, &Scenario::params, &SystemParams::eta_n>()},
        {"params.eta_f", member<SystemParams, &Scenario::params, &SystemParams::eta_f>()},
        {"params.delta_mn", member<SystemParams, &Scenario::params, &SystemParams::delta_mn>()},
        {"params.delta_nf", member<SystemParams, &Scenario::params, &SystemParams::delta_nf>()},
        {"params.q_nn", member<SystemParams, &Scenario::params, &SystemParams::q_nn>()},
        {"params.q_ff", member<SystemParams, &Scenario::params, &SystemParams::q_ff>()},
        {"params.q_nf", member<SystemParams, &Scenario::params, &SystemParams::q_nf>()},
    };
    return table;
}

const ParameterAccess& lookup(std::string_view path) {
    const auto& table = parameter_table();
    auto it = table.find(path);
    if (it == table.end()) {
        std::string msg = "unknown parameter path '" + std::string(path) + "'; expected one of:";
        for (const auto& [name, _] : table) msg += " " + name;
        throw InvalidArgument(msg);
    }
    return it->second;
}

}  // namespace

bool is_parameter_path(std::string_view path) {
    return parameter_table().contains(path);
}

std::vector<std::string> parameter_paths() {
    std::vector<std::string> out;
    for (const auto& [name, _] : parameter_table()) out.push_back(name);
    return out;
}

double get_parameter(const Scenario& s, std::string_view path) {
    return lookup(path).get(s);
}

void set_parameter(Scenario& s, std::string_view path, double value) {
    if (!std::isfinite(value))
        throw InvalidArgument("parameter " + std::string(path) + " must be finite");
    lookup(path).set(s, value);
}

void validate(const Scenario& s) {
    validate(s.schedule);
    validate(s.params);
    validate(s.integrator);
    const double pop = s.init.bound_population();
    if (!std::isfinite(pop) || !std::isfinite(s.init.W) || pop > 1.0 + 1e-12 || s.init.W < 0.0)
        throw InvalidArgument("initial state must be finite and (sub-)normalized");
}

Scenario with_covering_window(Scenario s) {
    s.integrator = covering_window(s.integrator, s.schedule);
    return s;
}

Observables evaluate(const Scenario& scenario) {
    const Scenario s = with_covering_window(scenario);
    return Observables::from(integrate(s.schedule, s.params, s.init, s.integrator).final_state());
}

std::vector<double> Axis::values() const {
    if (count < 2) throw InvalidArgument("axis " + path + ": count must be at least 2");
    if (!std::isfinite(min) || !std::isfinite(max))
        throw InvalidArgument("axis " + path + ": bounds must be finite");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = max;
    return v;
}

namespace {

Scenario two_pulse_base() {
    Scenario s;
    s.schedule.g_mn0 = 0.0;
    s.schedule.e1_enabled = false;
    s.schedule.g_nn0 = 3.61;
    s.schedule.g_ff0 = 9.61;
    s.schedule.delta2 = 0.0;
    s.schedule.delta3 = -3.9;
    s.schedule.d2 = 1.0;
    s.schedule.d3 = 1.0;
    s.params.q_nn = 0.2;
    s.params.q_ff = -0.5;
    s.params.q_nf = 10.0;
    s.init = AmplitudeState{.a_n = 1.0};
    return s;
}

Scenario dissociation_base(double g_nn0) {
    Scenario s = two_pulse_base();
    s.schedule.e1_enabled = true;
    s.schedule.g_mn0 = 2.0;
    s.schedule.g_nn0 = g_nn0;
    s.schedule.g_ff0 = 0.0;
    s.schedule.e3_enabled = false;
    s.schedule.delta3 = 0.0;
    s.params.delta_mn = 0.0;
    s.init = AmplitudeState{};
    s.init = AmplitudeState{.a_m = 1.0};
    return s;
}

Scenario three_pulse_base(double delta2) {
    Scenario s;
    s.schedule.g_mn0 = 2.0;
    s.schedule.g_nn0 = 0.25;
    s.schedule.g_ff0 = 0.36;
    s.schedule.delta2 = delta2;
    s.schedule.delta3 = 0.0;
    s.schedule.d2 = 1.0;
    s.schedule.d3 = 1.6;
    s.params.q_nn = 0.2;
    s.params.q_ff = -0.5;
    s.params.q_nf = 10.0;
    s.init = AmplitudeState{.a_m = 1.0};
    return s;
}

const Axis kTime{std::string(kTimeAxis), -8.0, 8.0, 161};
const Axis kFanoAxis{"params.q_nf", -20.0, 20.0, 201};
const Axis kDetuningAxis{"params.delta_nf", -10.0, 10.0, 201};

using enum Observable;

std::vector<ScenarioPreset> build_presets() {
    std::vector<ScenarioPreset> out;
    auto add = [&](std::string name, std::string description, Scenario s,
                   std::optional<SweepDescriptor> swept) {
        out.push_back({std::move(name), std::move(description), std::move(s), std::move(swept)});
    };

    add("fig2",
        "two-pulse transfer n -> f through the continuum, E1 off, a_n(0)=1, "
        "counterintuitive order (E3 before E2); swept over delay delta3 and time",
        two_pulse_base(),
        SweepDescriptor{{"schedule.delta3", -6.0, 2.0, 81}, kTime, {W, pop_f}});
    add("fig3a",
        "two-pulse transfer at delta3=-3.9: final transfer and dissociation vs q_nf",
        two_pulse_base(), SweepDescriptor{kFanoAxis, std::nullopt, {pop_f, W}});
    add("fig3b",
        "two-pulse transfer at delta3=-3.9: final transfer and dissociation vs two-photon "
        "detuning delta_nf",
        two_pulse_base(), SweepDescriptor{kDetuningAxis, std::nullopt, {pop_f, W}});

    add("fig4a",
        "two-pulse dissociation from m (E3 off, g_mn0=2, g_nn0=3.61) vs delay delta2 and time",
        dissociation_base(3.61),
        SweepDescriptor{{"schedule.delta2", -4.0, 4.0, 81}, kTime, {W}});
    add("fig4b",
        "two-pulse dissociation from m (E3 off, g_mn0=2, g_nn0=400) vs delay delta2 and time",
        dissociation_base(400.0),
        SweepDescriptor{{"schedule.delta2", -4.0, 4.0, 81}, kTime, {W}});
    const Axis intensity{"schedule.g_nn0", 0.1, 400.0, 100};
    add("fig4c",
        "two-pulse dissociation from m at delta2=0: final W vs peak width g_nn0",
        dissociation_base(3.61), SweepDescriptor{intensity, std::nullopt, {W}});
    add("fig4d",
        "two-pulse dissociation from m at delta2=0: final ground population vs g_nn0",
        dissociation_base(3.61), SweepDescriptor{intensity, std::nullopt, {pop_m}});
    add("fig4", "alias of fig4c", dissociation_base(3.61),
        SweepDescriptor{intensity, std::nullopt, {W}});

    const Axis delay2{"schedule.delta2", -4.0, 4.0, 81};
    add("fig5a",
        "three pulses (g_mn0=2, g_nn0=0.25, g_ff0=0.36, d3=1.6): final dissociation vs delay "
        "delta2",
        three_pulse_base(0.0), SweepDescriptor{delay2, std::nullopt, {W}});
    add("fig5b", "three pulses: final population of f vs delay delta2", three_pulse_base(0.0),
        SweepDescriptor{delay2, std::nullopt, {pop_f}});
    add("fig5c",
        "three pulses peaked together (delta2=0): comparable final populations and yield",
        three_pulse_base(0.0), std::nullopt);
    add("fig5d",
        "three pulses with E2 advanced (delta2=-1.5): f population and yield dominate",
        three_pulse_base(-1.5), std::nullopt);
    add("fig5", "alias of fig5c", three_pulse_base(0.0), std::nullopt);

    add("fig6a", "three pulses at delta2=2.8: final population of f vs q_nf",
        three_pulse_base(2.8), SweepDescriptor{kFanoAxis, std::nullopt, {pop_f}});
    add("fig6b", "three pulses at delta2=2.8: final population of f vs delta_nf",
        three_pulse_base(2.8), SweepDescriptor{kDetuningAxis, std::nullopt, {pop_f}});
    add("fig7",
        "three pulses at delta2=2.8, q_nf=10: dissociation and population of n vs delta_nf",
        three_pulse_base(2.8), SweepDescriptor{kDetuningAxis, std::nullopt, {W, pop_n}});
    return out;
}

const std::vector<ScenarioPreset>& presets() {
    static const std::vector<ScenarioPreset> all = build_presets();
    return all;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.push_back(p.name);
    return out;
}

ScenarioPreset preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    std::string msg = "unknown preset '" + std::string(name) + "'; available:";
    for (const auto& p : presets()) msg += " " + p.name;
    throw InvalidArgument(msg);
}

TransferOutcome two_pulse_lics(const Scenario& base, double delta3) {
    Scenario s = base;
    s.schedule.e1_enabled = false;
    s.schedule.delta3 = delta3;
    s.init = AmplitudeState{};
    s.init = AmplitudeState{.a_n = 1.0};
    const Observables o = evaluate(s);
    return {o.pop_n, o.pop_f, o.W};
}

}  // namespace lics
