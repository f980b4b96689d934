// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "lics/lics.h"

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "lics/errors.hpp"
#include "lics/optimize.hpp"
#include "lics/scenarios.hpp"
#include "lics/sweep.hpp"

struct lics_trajectory {
    lics::Trajectory trajectory;
};

struct lics_sweep_spec {
    lics::SweepSpec spec;
    bool has_axis1 = false;
};

struct lics_sweep_result {
    lics::SweepResult result;
    std::vector<std::string> observable_names;
};

struct lics_objective {
    lics::Objective objective;
};

struct lics_optimize_result {
    lics::OptimizeResult result;
    lics::Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

template <class F>
lics_status guarded(F&& body) noexcept {
    try {
        g_last_error.clear();
        body();
        return LICS_OK;
    } catch (const lics::InvalidArgument& e) {
        g_last_error = e.what();
        return LICS_ERR_INVALID_ARGUMENT;
    } catch (const lics::NumericalFailure& e) {
        g_last_error = e.what();
        return LICS_ERR_NUMERICAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LICS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return LICS_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw lics::InvalidArgument(std::string(what) + " is null");
}

lics_complex to_c(lics::cplx z) { return {z.real(), z.imag()}; }
lics::cplx from_c(lics_complex z) { return {z.re, z.im}; }

lics_state to_c(const lics::AmplitudeState& s) {
    return {to_c(s.a_m), to_c(s.a_n), to_c(s.a_f), s.W, s.T};
}

lics::AmplitudeState from_c(const lics_state& s) {
    lics::AmplitudeState out;
    out.a_m = from_c(s.a_m);
    out.a_n = from_c(s.a_n);
    out.a_f = from_c(s.a_f);
    out.W = s.W;
    out.T = s.T;
    return out;
}

lics_params to_c(const lics::SystemParams& p) {
    return {p.eta_m, p.eta_n, p.eta_f, p.delta_mn, p.delta_nf, p.q_nn, p.q_ff, p.q_nf};
}

lics::SystemParams from_c(const lics_params& p) {
    return {p.eta_m, p.eta_n, p.eta_f, p.delta_mn, p.delta_nf, p.q_nn, p.q_ff, p.q_nf};
}

lics_schedule to_c(const lics::PulseSchedule& s) {
    lics_schedule out{};
    out.g_mn0 = s.g_mn0;
    out.g_nn0 = s.g_nn0;
    out.g_ff0 = s.g_ff0;
    out.g_nf_auto = s.cross_auto() ? 1 : 0;
    out.g_nf0 = s.g_nf0 ? *s.g_nf0 : std::sqrt(s.g_nn0 * s.g_ff0);
    out.delta2 = s.delta2;
    out.delta3 = s.delta3;
    out.d2 = s.d2;
    out.d3 = s.d3;
    out.e1_enabled = s.e1_enabled;
    out.e2_enabled = s.e2_enabled;
    out.e3_enabled = s.e3_enabled;
    return out;
}

lics::PulseSchedule from_c(const lics_schedule& s) {
    lics::PulseSchedule out;
    out.g_mn0 = s.g_mn0;
    out.g_nn0 = s.g_nn0;
    out.g_ff0 = s.g_ff0;
    if (!s.g_nf_auto) out.g_nf0 = s.g_nf0;
    out.delta2 = s.delta2;
    out.delta3 = s.delta3;
    out.d2 = s.d2;
    out.d3 = s.d3;
    out.e1_enabled = s.e1_enabled != 0;
    out.e2_enabled = s.e2_enabled != 0;
    out.e3_enabled = s.e3_enabled != 0;
    return out;
}

lics_couplings to_c(const lics::InstantCouplings& c) { return {c.g_mn, c.g_nn, c.g_ff, c.g_nf}; }
lics::InstantCouplings from_c(const lics_couplings& c) {
    return {c.g_mn, c.g_nn, c.g_ff, c.g_nf};
}

lics_integrator_config to_c(const lics::IntegratorConfig& c) {
    return {c.rel_tol, c.abs_tol, c.max_step, c.t_start, c.t_end, c.max_steps};
}
lics::IntegratorConfig from_c(const lics_integrator_config& c) {
    return {c.rel_tol, c.abs_tol, c.max_step, c.t_start, c.t_end, c.max_steps};
}

lics_scenario to_c(const lics::Scenario& s) {
    return {to_c(s.schedule), to_c(s.params), to_c(s.init), to_c(s.integrator)};
}
lics::Scenario from_c(const lics_scenario& s) {
    return {from_c(s.schedule), from_c(s.params), from_c(s.init), from_c(s.integrator)};
}

lics_observables to_c(const lics::Observables& o) {
    return {o.pop_m, o.pop_n, o.pop_f, o.W, o.sum_total};
}

const std::vector<lics::ScenarioPreset>& preset_table() {
    static const std::vector<lics::ScenarioPreset> table = [] {
        std::vector<lics::ScenarioPreset> out;
        for (const auto& name : lics::preset_names()) out.push_back(lics::preset(name));
        return out;
    }();
    return table;
}

const std::vector<std::string>& path_table() {
    static const std::vector<std::string> table = lics::parameter_paths();
    return table;
}

std::vector<double> times_vector(const double* times, size_t n) {
    if (n > 0) require(times, "times");
    return n > 0 ? std::vector<double>(times, times + n) : std::vector<double>{};
}

lics::OutputGrid grid_from(const double* times, size_t n) {
    return n == 0 ? lics::OutputGrid::final_only() : lics::OutputGrid::at(times_vector(times, n));
}

}  // namespace

extern "C" {

const char* lics_version(void) { return "1.0.0"; }

const char* lics_last_error(void) { return g_last_error.c_str(); }

void lics_default_integrator_config(lics_integrator_config* out) {
    if (out) *out = to_c(lics::IntegratorConfig{});
}

void lics_default_scenario(lics_scenario* out) {
    if (out) *out = to_c(lics::Scenario{});
}

size_t lics_preset_count(void) { return preset_table().size(); }

const char* lics_preset_name(size_t index) {
    return index < preset_table().size() ? preset_table()[index].name.c_str() : nullptr;
}

const char* lics_preset_description(size_t index) {
    return index < preset_table().size() ? preset_table()[index].description.c_str() : nullptr;
}

lics_status lics_preset(const char* name, lics_scenario* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        *out = to_c(lics::preset(name).scenario);
    });
}

size_t lics_parameter_path_count(void) { return path_table().size(); }

const char* lics_parameter_path(size_t index) {
    return index < path_table().size() ? path_table()[index].c_str() : nullptr;
}

lics_status lics_scenario_get(const lics_scenario* s, const char* path, double* value) {
    return guarded([&] {
        require(s, "scenario");
        require(path, "path");
        require(value, "value");
        *value = lics::get_parameter(from_c(*s), path);
    });
}

lics_status lics_scenario_set(lics_scenario* s, const char* path, double value) {
    return guarded([&] {
        require(s, "scenario");
        require(path, "path");
        lics::Scenario cpp = from_c(*s);
        lics::set_parameter(cpp, path, value);
        *s = to_c(cpp);
    });
}

lics_status lics_scenario_validate(const lics_scenario* s) {
    return guarded([&] {
        require(s, "scenario");
        lics::validate(from_c(*s));
    });
}

lics_status lics_scenario_cover_window(lics_scenario* s) {
    return guarded([&] {
        require(s, "scenario");
        *s = to_c(lics::with_covering_window(from_c(*s)));
    });
}

lics_status lics_couplings_at(const lics_schedule* s, double T, lics_couplings* out) {
    return guarded([&] {
        require(s, "schedule");
        require(out, "out");
        const lics::PulseSchedule cpp = from_c(*s);
        lics::validate(cpp);
        *out = to_c(lics::couplings_at(cpp, T));
    });
}

lics_status lics_peak_cross_coupling(const lics_schedule* s, double* out) {
    return guarded([&] {
        require(s, "schedule");
        require(out, "out");
        const lics::PulseSchedule cpp = from_c(*s);
        lics::validate(cpp);
        *out = lics::peak_cross_coupling(cpp);
    });
}

lics_status lics_rhs(const lics_state* state, const lics_couplings* c, const lics_params* p,
                     lics_derivative* out) {
    return guarded([&] {
        require(state, "state");
        require(c, "couplings");
        require(p, "params");
        require(out, "out");
        const auto d = lics::rhs(from_c(*state), from_c(*c), from_c(*p));
        *out = {to_c(d.da_m), to_c(d.da_n), to_c(d.da_f), d.dW};
    });
}

lics_status lics_scale_to_dimensionless(const lics_dimensional* in, lics_params* params_out,
                                        lics_couplings* peaks_out) {
    return guarded([&] {
        require(in, "input");
        const lics::DimensionalParams d{in->gamma_m,  in->gamma_n,  in->gamma_f, in->tau,
                                        in->Omega_mn, in->Omega_nf, in->gamma_nn, in->gamma_ff,
                                        in->gamma_nf, in->G_mn};
        const auto scaled = lics::scale_to_dimensionless(d);
        if (params_out) *params_out = to_c(scaled.params);
        if (peaks_out) *peaks_out = to_c(scaled.peaks);
    });
}

double lics_conservation_slack(const lics_integrator_config* cfg) {
    return cfg ? lics::conservation_slack(from_c(*cfg)) : lics::conservation_slack({});
}

lics_status lics_integrate(const lics_scenario* s, const double* times, size_t n_times,
                           lics_trajectory** out) {
    return guarded([&] {
        require(s, "scenario");
        require(out, "out");
        *out = nullptr;
        const lics::Scenario cpp = from_c(*s);
        auto traj = lics::integrate(cpp.schedule, cpp.params, cpp.init, cpp.integrator,
                                    grid_from(times, n_times));
        *out = new lics_trajectory{std::move(traj)};
    });
}

lics_status lics_integrate_uniform(const lics_scenario* s, size_t count, lics_trajectory** out) {
    return guarded([&] {
        require(s, "scenario");
        require(out, "out");
        *out = nullptr;
        const lics::Scenario cpp = from_c(*s);
        auto traj = lics::integrate(cpp.schedule, cpp.params, cpp.init, cpp.integrator,
                                    lics::OutputGrid::uniform(count));
        *out = new lics_trajectory{std::move(traj)};
    });
}

lics_status lics_integrate_constant(const lics_couplings* c, const lics_scenario* s,
                                    const double* times, size_t n_times, lics_trajectory** out) {
    return guarded([&] {
        require(c, "couplings");
        require(s, "scenario");
        require(out, "out");
        *out = nullptr;
        const lics::Scenario cpp = from_c(*s);
        auto traj = lics::integrate(from_c(*c), cpp.params, cpp.init, cpp.integrator,
                                    grid_from(times, n_times));
        *out = new lics_trajectory{std::move(traj)};
    });
}

size_t lics_trajectory_size(const lics_trajectory* t) {
    return t ? t->trajectory.samples.size() : 0;
}

lics_status lics_trajectory_get(const lics_trajectory* t, size_t index, lics_state* out) {
    return guarded([&] {
        require(t, "trajectory");
        require(out, "out");
        if (index >= t->trajectory.samples.size())
            throw lics::InvalidArgument("trajectory index out of range");
        *out = to_c(t->trajectory.samples[index]);
    });
}

size_t lics_trajectory_warning_count(const lics_trajectory* t) {
    return t ? t->trajectory.warnings.size() : 0;
}

const char* lics_trajectory_warning(const lics_trajectory* t, size_t index) {
    if (!t || index >= t->trajectory.warnings.size()) return nullptr;
    return t->trajectory.warnings[index].c_str();
}

void lics_trajectory_free(lics_trajectory* t) { delete t; }

lics_status lics_evaluate(const lics_scenario* s, lics_observables* out) {
    return guarded([&] {
        require(s, "scenario");
        require(out, "out");
        *out = to_c(lics::evaluate(from_c(*s)));
    });
}

lics_status lics_constant_solution(const lics_couplings* c, const lics_params* p,
                                   const lics_state* init, double T, lics_state* out) {
    return guarded([&] {
        require(c, "couplings");
        require(p, "params");
        require(init, "init");
        require(out, "out");
        const lics::AmplitudeVector a0{from_c(init->a_m), from_c(init->a_n), from_c(init->a_f)};
        const auto a = lics::constant_coefficient_solution(from_c(*c), from_c(*p), a0, T);
        *out = {to_c(a[0]), to_c(a[1]), to_c(a[2]), std::numeric_limits<double>::quiet_NaN(), T};
    });
}

lics_sweep_spec* lics_sweep_spec_new(const lics_scenario* base) {
    auto* spec = new lics_sweep_spec{};
    if (base) spec->spec.base = from_c(*base);
    return spec;
}

void lics_sweep_spec_free(lics_sweep_spec* spec) { delete spec; }

lics_status lics_sweep_spec_set_base(lics_sweep_spec* spec, const lics_scenario* base) {
    return guarded([&] {
        require(spec, "spec");
        require(base, "base");
        spec->spec.base = from_c(*base);
    });
}

lics_status lics_sweep_spec_set_axis(lics_sweep_spec* spec, int axis, const char* path,
                                     double min, double max, size_t count) {
    return guarded([&] {
        require(spec, "spec");
        require(path, "path");
        lics::Axis a{path, min, max, count};
        (void)a.values();
        if (a.path != lics::kTimeAxis) (void)lics::get_parameter(spec->spec.base, a.path);
        if (axis == 1 && a.path == lics::kTimeAxis)
            throw lics::InvalidArgument("the time axis \"T\" is only allowed as axis 2");
        if (axis == 1) {
            spec->spec.axis1 = a;
            spec->has_axis1 = true;
        } else if (axis == 2) {
            spec->spec.axis2 = a;
        } else {
            throw lics::InvalidArgument("axis must be 1 or 2");
        }
    });
}

lics_status lics_sweep_spec_add_observable(lics_sweep_spec* spec, const char* name) {
    return guarded([&] {
        require(spec, "spec");
        require(name, "name");
        const auto o = lics::parse_observable(name);
        for (auto existing : spec->spec.observables) {
            if (existing == o) return;
        }
        spec->spec.observables.push_back(o);
    });
}

void lics_sweep_spec_set_permit_partial(lics_sweep_spec* spec, int permit) {
    if (spec) spec->spec.permit_partial = permit != 0;
}

lics_status lics_sweep_spec_from_preset(const char* preset, lics_sweep_spec** out) {
    return guarded([&] {
        require(preset, "preset");
        require(out, "out");
        *out = nullptr;
        const auto p = lics::preset(preset);
        if (!p.swept) throw lics::InvalidArgument("preset '" + p.name + "' has no sweep axes");
        auto* spec = new lics_sweep_spec{};
        spec->spec.base = p.scenario;
        spec->spec.axis1 = p.swept->axis1;
        spec->spec.axis2 = p.swept->axis2;
        spec->spec.observables = p.swept->observables;
        spec->has_axis1 = true;
        *out = spec;
    });
}

lics_status lics_sweep_run(const lics_sweep_spec* spec, unsigned workers,
                           lics_sweep_result** out) {
    return guarded([&] {
        require(spec, "spec");
        require(out, "out");
        *out = nullptr;
        if (!spec->has_axis1) throw lics::InvalidArgument("sweep axis1 is not set");
        auto result = lics::run_sweep(spec->spec, workers);
        auto* r = new lics_sweep_result{std::move(result), {}};
        for (auto o : r->result.spec.observables)
            r->observable_names.emplace_back(lics::to_string(o));
        *out = r;
    });
}

void lics_sweep_result_free(lics_sweep_result* r) { delete r; }

size_t lics_sweep_result_rows(const lics_sweep_result* r) { return r ? r->result.rows : 0; }
size_t lics_sweep_result_cols(const lics_sweep_result* r) { return r ? r->result.cols : 0; }

const double* lics_sweep_result_axis(const lics_sweep_result* r, int axis, size_t* n) {
    const std::vector<double>* v = nullptr;
    if (r && axis == 1) v = &r->result.axis1_values;
    if (r && axis == 2) v = &r->result.axis2_values;
    if (n) *n = v ? v->size() : 0;
    return v && !v->empty() ? v->data() : nullptr;
}

const char* lics_sweep_result_axis_path(const lics_sweep_result* r, int axis) {
    if (!r) return nullptr;
    if (axis == 1) return r->result.spec.axis1.path.c_str();
    if (axis == 2 && r->result.spec.axis2) return r->result.spec.axis2->path.c_str();
    return nullptr;
}

size_t lics_sweep_result_observable_count(const lics_sweep_result* r) {
    return r ? r->observable_names.size() : 0;
}

const char* lics_sweep_result_observable(const lics_sweep_result* r, size_t index) {
    if (!r || index >= r->observable_names.size()) return nullptr;
    return r->observable_names[index].c_str();
}

const double* lics_sweep_result_matrix(const lics_sweep_result* r, const char* observable) {
    if (!r || !observable) return nullptr;
    for (const auto& [o, m] : r->result.matrices) {
        if (lics::to_string(o) == observable) return m.data();
    }
    return nullptr;
}

size_t lics_sweep_result_failed_count(const lics_sweep_result* r) {
    return r ? r->result.failed.size() : 0;
}

lics_status lics_sweep_result_failed(const lics_sweep_result* r, size_t index, size_t* i,
                                     size_t* j, const char** message) {
    return guarded([&] {
        require(r, "result");
        if (index >= r->result.failed.size())
            throw lics::InvalidArgument("failed-cell index out of range");
        const auto& f = r->result.failed[index];
        if (i) *i = f.i;
        if (j) *j = f.j;
        if (message) *message = f.message.c_str();
    });
}

double lics_sweep_result_wall_seconds(const lics_sweep_result* r) {
    return r ? r->result.wall_seconds : 0.0;
}

lics_objective* lics_objective_new(const lics_scenario* base) {
    auto* o = new lics_objective{};
    if (base) o->objective.base = from_c(*base);
    return o;
}

void lics_objective_free(lics_objective* o) { delete o; }

lics_status lics_objective_add_target(lics_objective* o, const char* observable, double value,
                                      double weight) {
    return guarded([&] {
        require(o, "objective");
        require(observable, "observable");
        const auto which = lics::parse_observable(observable);
        if (which == lics::Observable::sum_total)
            throw lics::InvalidArgument("sum_total cannot be an optimization target");
        o->objective.targets.push_back({which, value, weight});
    });
}

lics_status lics_objective_add_free(lics_objective* o, const char* path, double min,
                                    double max) {
    return guarded([&] {
        require(o, "objective");
        require(path, "path");
        (void)lics::get_parameter(o->objective.base, path);
        o->objective.free.push_back({path, min, max});
    });
}

lics_status lics_objective_set_initial(lics_objective* o, const double* x, size_t n) {
    return guarded([&] {
        require(o, "objective");
        if (n == 0) {
            o->objective.initial.reset();
            return;
        }
        require(x, "x");
        o->objective.initial = std::vector<double>(x, x + n);
    });
}

lics_status lics_objective_validate(const lics_objective* o) {
    return guarded([&] {
        require(o, "objective");
        lics::validate(o->objective);
    });
}

size_t lics_objective_minimum_budget(const lics_objective* o) {
    return o ? lics::minimum_budget(o->objective) : 0;
}

lics_status lics_optimize(const lics_objective* o, size_t budget, uint64_t seed,
                          unsigned workers, lics_optimize_result** out) {
    return guarded([&] {
        require(o, "objective");
        require(out, "out");
        *out = nullptr;
        auto result = lics::optimize(o->objective, budget, seed, workers);
        lics::Scenario scenario = o->objective.apply(result.best);
        *out = new lics_optimize_result{std::move(result), std::move(scenario)};
    });
}

void lics_optimize_result_free(lics_optimize_result* r) { delete r; }

const double* lics_optimize_result_best(const lics_optimize_result* r, size_t* n) {
    if (n) *n = r ? r->result.best.size() : 0;
    return r ? r->result.best.data() : nullptr;
}

void lics_optimize_result_achieved(const lics_optimize_result* r, lics_observables* out) {
    if (r && out) *out = to_c(r->result.achieved);
}

double lics_optimize_result_objective(const lics_optimize_result* r) {
    return r ? r->result.objective : std::numeric_limits<double>::quiet_NaN();
}

size_t lics_optimize_result_evaluations(const lics_optimize_result* r) {
    return r ? r->result.evaluations : 0;
}

int lics_optimize_result_converged(const lics_optimize_result* r) {
    return r && r->result.converged ? 1 : 0;
}

const double* lics_optimize_result_trace(const lics_optimize_result* r, size_t* n) {
    if (n) *n = r ? r->result.trace.size() : 0;
    return r ? r->result.trace.data() : nullptr;
}

void lics_optimize_result_scenario(const lics_optimize_result* r, lics_scenario* out) {
    if (r && out) *out = to_c(r->scenario);
}

}  // extern "C"
