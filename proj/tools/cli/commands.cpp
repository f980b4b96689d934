// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "tables.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace licsctl {

namespace {

struct TrajectoryFree {
    void operator()(lics_trajectory* p) const { lics_trajectory_free(p); }
};
struct SpecFree {
    void operator()(lics_sweep_spec* p) const { lics_sweep_spec_free(p); }
};
struct SweepResultFree {
    void operator()(lics_sweep_result* p) const { lics_sweep_result_free(p); }
};
struct ObjectiveFree {
    void operator()(lics_objective* p) const { lics_objective_free(p); }
};
struct OptimizeResultFree {
    void operator()(lics_optimize_result* p) const { lics_optimize_result_free(p); }
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json observables_json(const lics_observables& o) {
    return {{"pop_m", o.pop_m}, {"pop_n", o.pop_n}, {"pop_f", o.pop_f},
            {"W", o.W},         {"sum_total", o.sum_total}};
}

lics_observables observe(const lics_state& s) {
    lics_observables o;
    o.pop_m = s.a_m.re * s.a_m.re + s.a_m.im * s.a_m.im;
    o.pop_n = s.a_n.re * s.a_n.re + s.a_n.im * s.a_n.im;
    o.pop_f = s.a_f.re * s.a_f.re + s.a_f.im * s.a_f.im;
    o.W = s.W;
    o.sum_total = o.pop_m + o.pop_n + o.pop_f + o.W;
    return o;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

fs::path prepare(const RunConfig& cfg, const RunOptions& opts) {
    const fs::path dir = output_directory(cfg, opts);
    fs::create_directories(dir);
    return dir;
}

std::string scenario_label(const RunConfig& cfg) {
    return cfg.preset ? *cfg.preset : std::string("explicit");
}

}  // namespace

fs::path output_directory(const RunConfig& cfg, const RunOptions& opts) {
    return opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfg.output.directory);
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (const auto* lib = dynamic_cast<const LibraryError*>(&e)) {
        switch (lib->status()) {
            case LICS_ERR_INVALID_ARGUMENT: return 2;
            case LICS_ERR_NUMERICAL: return 3;
            default: return 1;
        }
    }
    return 1;
}

void cmd_simulate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    lics_scenario s = cfg.scenario;
    check(lics_scenario_cover_window(&s), "simulate");
    const SimulateBlock sim = cfg.simulate.value_or(SimulateBlock{161, {}});

    lics_trajectory* raw = nullptr;
    if (sim.samples)
        check(lics_integrate_uniform(&s, *sim.samples, &raw), "simulate");
    else
        check(lics_integrate(&s, sim.times.empty() ? nullptr : sim.times.data(), sim.times.size(),
                             &raw),
              "simulate");
    std::unique_ptr<lics_trajectory, TrajectoryFree> traj(raw);

    const std::size_t n = lics_trajectory_size(traj.get());
    std::vector<lics_state> rows(n);
    for (std::size_t i = 0; i < n; ++i) check(lics_trajectory_get(traj.get(), i, &rows[i]), "simulate");

    const fs::path dir = prepare(cfg, opts);
    double residual = 0.0;
    for (const auto& st : rows) residual = std::max(residual, std::abs(observe(st).sum_total - 1.0));

    for (const auto& format : cfg.output.formats) {
        const char d = delimiter_for(format);
        std::string text;
        const char* columns[] = {"T",     "re_a_m", "im_a_m", "re_a_n", "im_a_n", "re_a_f",
                                 "im_a_f", "pop_m", "pop_n",  "pop_f",  "W",      "sum_total"};
        for (std::size_t c = 0; c < std::size(columns); ++c) {
            if (c) text += d;
            text += columns[c];
        }
        text += '\n';
        for (const auto& st : rows) {
            const auto o = observe(st);
            const double values[] = {st.T,     st.a_m.re, st.a_m.im, st.a_n.re, st.a_n.im, st.a_f.re,
                                     st.a_f.im, o.pop_m,  o.pop_n,   o.pop_f,   o.W,       o.sum_total};
            for (std::size_t c = 0; c < std::size(values); ++c) {
                if (c) text += d;
                text += format_value(values[c]);
            }
            text += '\n';
        }
        write_file(dir / ("trajectory." + format), text);
    }

    json warnings = json::array();
    for (std::size_t i = 0; i < lics_trajectory_warning_count(traj.get()); ++i)
        warnings.push_back(lics_trajectory_warning(traj.get(), i));
    const auto final_obs = observe(rows.back());
    const bool lossless =
        s.params.eta_m == 0.0 && s.params.eta_n == 0.0 && s.params.eta_f == 0.0;
    const json summary = {{"command", "simulate"},
                          {"scenario", scenario_label(cfg)},
                          {"final", observables_json(final_obs)},
                          {"final_T", rows.back().T},
                          {"conservation_residual", residual},
                          {"conservation_slack", lics_conservation_slack(&s.integrator)},
                          {"lossless", lossless},
                          {"samples", n},
                          {"window", {s.integrator.t_start, s.integrator.t_end}},
                          {"warnings", warnings},
                          {"config", to_json(cfg)}};
    write_file(dir / "summary.json", dump(summary));

    log << "simulate: " << n << " samples written to " << dir.string() << '\n'
        << "final pop_m=" << format_value(final_obs.pop_m)
        << " pop_n=" << format_value(final_obs.pop_n) << " pop_f=" << format_value(final_obs.pop_f)
        << " W=" << format_value(final_obs.W) << " residual=" << format_value(residual) << '\n';
    for (const auto& w : warnings) log << "warning: " << w.get<std::string>() << '\n';
}

void cmd_sweep(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    std::unique_ptr<lics_sweep_spec, SpecFree> spec;
    bool permit = opts.permit_partial;
    if (cfg.sweep) {
        const auto& b = *cfg.sweep;
        spec.reset(lics_sweep_spec_new(&cfg.scenario));
        check(lics_sweep_spec_set_axis(spec.get(), 1, b.axis1.path.c_str(), b.axis1.min, b.axis1.max,
                                       b.axis1.count),
              "sweep");
        if (b.axis2)
            check(lics_sweep_spec_set_axis(spec.get(), 2, b.axis2->path.c_str(), b.axis2->min,
                                           b.axis2->max, b.axis2->count),
                  "sweep");
        for (const auto& o : b.observables)
            check(lics_sweep_spec_add_observable(spec.get(), o.c_str()), "sweep");
        permit = permit || b.permit_partial;
    } else if (cfg.preset) {
        lics_sweep_spec* raw = nullptr;
        if (lics_sweep_spec_from_preset(cfg.preset->c_str(), &raw) != LICS_OK)
            throw ConfigError(std::string("config.sweep: missing, and ") + lics_last_error());
        spec.reset(raw);
        check(lics_sweep_spec_set_base(spec.get(), &cfg.scenario), "sweep");
    } else {
        throw ConfigError("config.sweep: required for an explicit scenario");
    }
    lics_sweep_spec_set_permit_partial(spec.get(), permit ? 1 : 0);

    lics_sweep_result* raw = nullptr;
    check(lics_sweep_run(spec.get(), opts.workers, &raw), "sweep");
    std::unique_ptr<lics_sweep_result, SweepResultFree> r(raw);

    const fs::path dir = prepare(cfg, opts);
    const std::size_t rows = lics_sweep_result_rows(r.get());
    const std::size_t cols = lics_sweep_result_cols(r.get());
    std::size_t n1 = 0, n2 = 0;
    const double* ax1 = lics_sweep_result_axis(r.get(), 1, &n1);
    const double* ax2 = lics_sweep_result_axis(r.get(), 2, &n2);
    const std::string path1 = lics_sweep_result_axis_path(r.get(), 1);
    const char* path2_raw = lics_sweep_result_axis_path(r.get(), 2);
    const std::string path2 = path2_raw ? path2_raw : "";
    const std::size_t failed = lics_sweep_result_failed_count(r.get());

    MatrixTable table;
    table.axis1.assign(ax1, ax1 + n1);
    if (ax2) table.axis2.assign(ax2, ax2 + n2);
    table.meta["axis1"] = path1;
    table.meta["axis2"] = path2.empty() ? "none" : path2;
    table.meta["rows"] = std::to_string(rows);
    table.meta["cols"] = std::to_string(cols);
    table.meta["scenario"] = scenario_label(cfg);
    table.meta["permit_partial"] = permit ? "true" : "false";
    table.meta["failed"] = std::to_string(failed);

    json matrices = json::object();
    for (std::size_t k = 0; k < lics_sweep_result_observable_count(r.get()); ++k) {
        const std::string name = lics_sweep_result_observable(r.get(), k);
        const double* m = lics_sweep_result_matrix(r.get(), name.c_str());
        table.meta["observable"] = name;
        table.cells.assign(m, m + rows * cols);
        for (const auto& format : cfg.output.formats) {
            std::ostringstream out;
            write_matrix(out, table, delimiter_for(format));
            write_file(dir / (name + "." + format), out.str());
        }
        json grid = json::array();
        for (std::size_t i = 0; i < rows; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < cols; ++j) row.push_back(number_or_null(m[i * cols + j]));
            grid.push_back(row);
        }
        matrices[name] = grid;
    }

    for (const auto& format : cfg.output.formats) {
        const char d = delimiter_for(format);
        std::string text = std::string("axis") + d + "path" + d + "index" + d + "value\n";
        for (std::size_t i = 0; i < n1; ++i)
            text += std::string("1") + d + path1 + d + std::to_string(i) + d + format_value(ax1[i]) + '\n';
        for (std::size_t j = 0; j < n2; ++j)
            text += std::string("2") + d + path2 + d + std::to_string(j) + d + format_value(ax2[j]) + '\n';
        write_file(dir / ("axes." + format), text);
    }

    json failures = json::array();
    for (std::size_t k = 0; k < failed; ++k) {
        std::size_t i = 0, j = 0;
        const char* msg = nullptr;
        check(lics_sweep_result_failed(r.get(), k, &i, &j, &msg), "sweep");
        failures.push_back({{"i", i}, {"j", j}, {"message", msg}});
    }
    json axis2 = nullptr;
    if (ax2) axis2 = {{"path", path2}, {"values", std::vector<double>(ax2, ax2 + n2)}};
    const json summary = {{"command", "sweep"},
                          {"scenario", scenario_label(cfg)},
                          {"axis1", {{"path", path1}, {"values", std::vector<double>(ax1, ax1 + n1)}}},
                          {"axis2", axis2},
                          {"rows", rows},
                          {"cols", cols},
                          {"matrices", matrices},
                          {"permit_partial", permit},
                          {"partial", failed > 0},
                          {"failed", failures},
                          {"integrator", scenario_to_json(cfg.scenario)["integrator"]},
                          {"wall_seconds", lics_sweep_result_wall_seconds(r.get())},
                          {"config", to_json(cfg)}};
    write_file(dir / "sweep.json", dump(summary));

    log << "sweep: " << rows << " x " << cols << " cells written to " << dir.string() << " in "
        << format_value(lics_sweep_result_wall_seconds(r.get())) << " s";
    if (failed) log << " (" << failed << " failed cells marked nan)";
    log << '\n';
}

RunConfig optimum_echo(const RunConfig& cfg, const lics_scenario& best, const fs::path& out_dir) {
    RunConfig echo;
    echo.scenario = best;
    echo.simulate = SimulateBlock{std::nullopt, {}};
    echo.output.directory = (out_dir / "optimum").string();
    echo.output.formats = cfg.output.formats;
    return echo;
}

void cmd_optimize(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    if (!cfg.optimize) throw ConfigError("config.optimize: required for the optimize command");
    const auto& b = *cfg.optimize;
    std::unique_ptr<lics_objective, ObjectiveFree> obj(lics_objective_new(&cfg.scenario));
    for (const auto& t : b.targets)
        check(lics_objective_add_target(obj.get(), t.observable.c_str(), t.value, t.weight), "optimize");
    for (const auto& f : b.free)
        check(lics_objective_add_free(obj.get(), f.path.c_str(), f.min, f.max), "optimize");
    if (b.initial)
        check(lics_objective_set_initial(obj.get(), b.initial->data(), b.initial->size()), "optimize");

    const std::uint64_t seed = opts.seed.value_or(b.seed);
    lics_optimize_result* raw = nullptr;
    check(lics_optimize(obj.get(), b.budget, seed, opts.workers, &raw), "optimize");
    std::unique_ptr<lics_optimize_result, OptimizeResultFree> r(raw);

    std::size_t n = 0;
    const double* best = lics_optimize_result_best(r.get(), &n);
    lics_observables achieved{};
    lics_optimize_result_achieved(r.get(), &achieved);
    std::size_t tn = 0;
    const double* trace = lics_optimize_result_trace(r.get(), &tn);
    lics_scenario best_scenario{};
    lics_optimize_result_scenario(r.get(), &best_scenario);

    const fs::path dir = prepare(cfg, opts);
    const RunConfig echo = optimum_echo(cfg, best_scenario, dir);

    json best_json = json::array();
    for (std::size_t i = 0; i < n; ++i) best_json.push_back({{"path", b.free[i].path}, {"value", best[i]}});
    const json result = {{"command", "optimize"},
                         {"scenario", scenario_label(cfg)},
                         {"best", best_json},
                         {"achieved", observables_json(achieved)},
                         {"objective", lics_optimize_result_objective(r.get())},
                         {"evaluations", lics_optimize_result_evaluations(r.get())},
                         {"converged", lics_optimize_result_converged(r.get()) != 0},
                         {"budget", b.budget},
                         {"seed", seed},
                         {"trace", std::vector<double>(trace, trace + tn)},
                         {"simulate_config", to_json(echo)},
                         {"config", to_json(cfg)}};
    write_file(dir / "optimize.json", dump(result));
    write_file(dir / "optimum_simulate.json", dump(to_json(echo)));

    log << "optimize: objective=" << format_value(lics_optimize_result_objective(r.get()))
        << " after " << lics_optimize_result_evaluations(r.get()) << " evaluations\n";
    for (std::size_t i = 0; i < n; ++i) log << "  " << b.free[i].path << " = " << format_value(best[i]) << '\n';
    log << "  achieved pop_m=" << format_value(achieved.pop_m)
        << " pop_n=" << format_value(achieved.pop_n) << " pop_f=" << format_value(achieved.pop_f)
        << " W=" << format_value(achieved.W) << '\n';
}

void cmd_presets(std::ostream& out) {
    for (std::size_t i = 0; i < lics_preset_count(); ++i)
        out << lics_preset_name(i) << '\t' << lics_preset_description(i) << '\n';
}

}  // namespace licsctl
