// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

using nlohmann::json;

namespace licsctl {

void check(lics_status s, const std::string& context) {
    if (s == LICS_OK) return;
    throw LibraryError(s, context + ": " + lics_last_error());
}

namespace {

const char* type_name(const json& j) { return j.type_name(); }

/// Walks one JSON object, recording which keys were consumed so leftovers can be
/// reported as unknown.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object())
            throw ConfigError(where_ + ": expected an object, got " + type_name(j_));
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string at(const std::string& key) const { return where_ + "." + key; }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key) + ": expected a number, got " + type_name(v));
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(at(key) + ": must be finite");
        return d;
    }
    void number(const std::string& key, double& out) {
        if (has(key)) out = number(key);
    }

    std::uint64_t unsigned_int(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_unsigned())
            throw ConfigError(at(key) + ": expected a non-negative integer, got " + v.dump());
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(at(key) + ": expected true or false");
        return v.get<bool>();
    }
    void boolean(const std::string& key, int& out) {
        if (has(key)) out = boolean(key) ? 1 : 0;
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key) + ": expected a string, got " + type_name(v));
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>()))
                throw ConfigError(at(key) + ": expected an array of finite numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key) + ": expected an array of strings");
        std::vector<std::string> out;
        for (const auto& e : v) {
            if (!e.is_string()) throw ConfigError(at(key) + ": expected an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    Reader object(const std::string& key) { return Reader(raw(key), at(key)); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(at(it.key()) + ": unknown key");
        }
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

const std::set<std::string> kIntegratorKeys = {"rel_tol", "abs_tol", "max_step",
                                               "t_start", "t_end",   "max_steps"};

void apply_integrator(lics_integrator_config& c, const std::string& key, double v) {
    if (key == "rel_tol") c.rel_tol = v;
    else if (key == "abs_tol") c.abs_tol = v;
    else if (key == "max_step") c.max_step = v;
    else if (key == "t_start") c.t_start = v;
    else if (key == "t_end") c.t_end = v;
    else if (key == "max_steps") c.max_steps = static_cast<std::uint64_t>(v);
}

std::map<std::string, double> read_integrator(Reader r) {
    std::map<std::string, double> out;
    for (const auto& key : kIntegratorKeys) {
        if (!r.has(key)) continue;
        out[key] = key == "max_steps" ? static_cast<double>(r.unsigned_int(key)) : r.number(key);
    }
    r.finish();
    return out;
}

lics_complex read_complex(Reader& r, const std::string& key) {
    const json& v = r.raw(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(r.at(key) + ": expected a number or a [re, im] pair");
}

void read_schedule(Reader r, lics_schedule& s) {
    r.number("g_mn0", s.g_mn0);
    r.number("g_nn0", s.g_nn0);
    r.number("g_ff0", s.g_ff0);
    if (r.has("g_nf0")) {
        const json& v = r.raw("g_nf0");
        if (v.is_string() && v.get<std::string>() == "auto") {
            s.g_nf_auto = 1;
            s.g_nf0 = 0.0;
        } else if (v.is_number()) {
            s.g_nf_auto = 0;
            s.g_nf0 = v.get<double>();
        } else {
            throw ConfigError(r.at("g_nf0") + ": expected a number or \"auto\"");
        }
    }
    r.number("delta2", s.delta2);
    r.number("delta3", s.delta3);
    r.number("d2", s.d2);
    r.number("d3", s.d3);
    r.boolean("e1_enabled", s.e1_enabled);
    r.boolean("e2_enabled", s.e2_enabled);
    r.boolean("e3_enabled", s.e3_enabled);
    r.finish();
}

void read_params(Reader r, lics_params& p) {
    r.number("eta_m", p.eta_m);
    r.number("eta_n", p.eta_n);
    r.number("eta_f", p.eta_f);
    r.number("delta_mn", p.delta_mn);
    r.number("delta_nf", p.delta_nf);
    r.number("q_nn", p.q_nn);
    r.number("q_ff", p.q_ff);
    r.number("q_nf", p.q_nf);
    r.finish();
}

void read_init(Reader r, lics_state& s) {
    // An explicit init block replaces the default ground state entirely.
    s = lics_state{};
    if (r.has("a_m")) s.a_m = read_complex(r, "a_m");
    if (r.has("a_n")) s.a_n = read_complex(r, "a_n");
    if (r.has("a_f")) s.a_f = read_complex(r, "a_f");
    r.number("W", s.W);
    r.finish();
}

void read_scenario(Reader r, RunConfig& cfg) {
    const bool explicit_form = r.has("schedule") || r.has("params") || r.has("init");
    if (r.has("preset") && explicit_form)
        throw ConfigError(
            "config.scenario: \"preset\" and an explicit schedule/params/init block are "
            "mutually exclusive");
    if (r.has("overrides") && !r.has("preset"))
        throw ConfigError("config.scenario.overrides: only allowed together with \"preset\"");

    if (r.has("preset")) {
        cfg.preset = r.string("preset");
        if (lics_preset(cfg.preset->c_str(), &cfg.scenario) != LICS_OK)
            throw ConfigError(r.at("preset") + ": " + lics_last_error());
        if (r.has("overrides")) {
            Reader o = r.object("overrides");
            const json& raw = r.raw("overrides");
            for (auto it = raw.begin(); it != raw.end(); ++it)
                cfg.overrides[it.key()] = o.number(it.key());
            o.finish();
        }
        for (const auto& [path, value] : cfg.overrides) {
            if (lics_scenario_set(&cfg.scenario, path.c_str(), value) != LICS_OK)
                throw ConfigError(r.at("overrides") + "." + path + ": " + lics_last_error());
        }
        if (r.has("integrator")) cfg.integrator = read_integrator(r.object("integrator"));
        for (const auto& [key, value] : cfg.integrator)
            apply_integrator(cfg.scenario.integrator, key, value);
    } else {
        if (!explicit_form)
            throw ConfigError(
                "config.scenario: needs either \"preset\" or explicit schedule/params/init "
                "blocks");
        lics_default_scenario(&cfg.scenario);
        if (r.has("schedule")) read_schedule(r.object("schedule"), cfg.scenario.schedule);
        if (r.has("params")) read_params(r.object("params"), cfg.scenario.params);
        if (r.has("init")) read_init(r.object("init"), cfg.scenario.init);
        if (r.has("integrator")) {
            for (const auto& [key, value] : read_integrator(r.object("integrator")))
                apply_integrator(cfg.scenario.integrator, key, value);
        }
    }
    r.finish();
}

AxisBlock read_axis(Reader r) {
    AxisBlock a;
    a.path = r.string("path");
    a.min = r.number("min");
    a.max = r.number("max");
    a.count = r.unsigned_int("count");
    r.finish();
    return a;
}

SimulateBlock read_simulate(Reader r) {
    SimulateBlock b;
    if (r.has("samples") && r.has("times"))
        throw ConfigError("config.simulate: \"samples\" and \"times\" are mutually exclusive");
    if (r.has("samples")) b.samples = r.unsigned_int("samples");
    if (r.has("times")) b.times = r.numbers("times");
    if (!b.samples && !r.has("times")) b.samples = 161;
    r.finish();
    return b;
}

SweepBlock read_sweep(Reader r) {
    SweepBlock b;
    b.axis1 = read_axis(r.object("axis1"));
    if (r.has("axis2")) b.axis2 = read_axis(r.object("axis2"));
    b.observables = r.strings("observables");
    if (r.has("permit_partial")) b.permit_partial = r.boolean("permit_partial");
    r.finish();
    return b;
}

OptimizeBlock read_optimize(Reader r) {
    OptimizeBlock b;
    const json& targets = r.raw("targets");
    if (!targets.is_array()) throw ConfigError(r.at("targets") + ": expected an array");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Reader t(targets[i], r.at("targets") + "[" + std::to_string(i) + "]");
        TargetBlock tb;
        tb.observable = t.string("observable");
        tb.value = t.number("value");
        t.number("weight", tb.weight);
        t.finish();
        b.targets.push_back(tb);
    }
    const json& free = r.raw("free");
    if (!free.is_array()) throw ConfigError(r.at("free") + ": expected an array");
    for (std::size_t i = 0; i < free.size(); ++i) {
        Reader f(free[i], r.at("free") + "[" + std::to_string(i) + "]");
        FreeBlock fb;
        fb.path = f.string("path");
        fb.min = f.number("min");
        fb.max = f.number("max");
        f.finish();
        b.free.push_back(fb);
    }
    if (r.has("budget")) b.budget = r.unsigned_int("budget");
    if (r.has("seed")) b.seed = r.unsigned_int("seed");
    if (r.has("initial")) b.initial = r.numbers("initial");
    r.finish();
    return b;
}

OutputBlock read_output(Reader r) {
    OutputBlock b;
    if (r.has("directory")) b.directory = r.string("directory");
    if (r.has("formats")) b.formats = r.strings("formats");
    r.finish();
    return b;
}

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool same(const lics_complex& a, const lics_complex& b) { return a.re == b.re && a.im == b.im; }

bool same(const lics_scenario& a, const lics_scenario& b) {
    const auto& s = a.schedule;
    const auto& t = b.schedule;
    const auto& p = a.params;
    const auto& q = b.params;
    const auto& i = a.integrator;
    const auto& j = b.integrator;
    return s.g_mn0 == t.g_mn0 && s.g_nn0 == t.g_nn0 && s.g_ff0 == t.g_ff0 &&
           s.g_nf_auto == t.g_nf_auto && (s.g_nf_auto || s.g_nf0 == t.g_nf0) &&
           s.delta2 == t.delta2 && s.delta3 == t.delta3 && s.d2 == t.d2 && s.d3 == t.d3 &&
           s.e1_enabled == t.e1_enabled && s.e2_enabled == t.e2_enabled &&
           s.e3_enabled == t.e3_enabled && p.eta_m == q.eta_m && p.eta_n == q.eta_n &&
           p.eta_f == q.eta_f && p.delta_mn == q.delta_mn && p.delta_nf == q.delta_nf &&
           p.q_nn == q.q_nn && p.q_ff == q.q_ff && p.q_nf == q.q_nf &&
           same(a.init.a_m, b.init.a_m) && same(a.init.a_n, b.init.a_n) &&
           same(a.init.a_f, b.init.a_f) && a.init.W == b.init.W && i.rel_tol == j.rel_tol &&
           i.abs_tol == j.abs_tol && i.max_step == j.max_step && i.t_start == j.t_start &&
           i.t_end == j.t_end && i.max_steps == j.max_steps;
}

json complex_json(const lics_complex& c) { return json::array({c.re, c.im}); }

json axis_json(const AxisBlock& a) {
    return {{"path", a.path}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

json integrator_json(const lics_integrator_config& c) {
    return {{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol},     {"max_step", c.max_step},
            {"t_start", c.t_start}, {"t_end", c.t_end}, {"max_steps", c.max_steps}};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

void config_check(lics_status s, const std::string& where) {
    if (s != LICS_OK) throw ConfigError(where + ": " + lics_last_error());
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.preset == b.preset && a.overrides == b.overrides && a.integrator == b.integrator &&
           same(a.scenario, b.scenario) && a.simulate == b.simulate && a.sweep == b.sweep &&
           a.optimize == b.optimize && a.output == b.output;
}

RunConfig parse_config(const std::string& text) {
    std::vector<std::set<std::string>> open_objects;
    const json::parser_callback_t reject_duplicates = [&](int, json::parse_event_t event,
                                                          json& parsed) {
        if (event == json::parse_event_t::object_start) {
            open_objects.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            open_objects.pop_back();
        } else if (event == json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!open_objects.back().insert(key).second)
                throw ConfigError("duplicate key \"" + key + "\"");
        }
        return true;
    };

    json root;
    try {
        root = json::parse(text, reject_duplicates);
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        const auto colon = msg.rfind(": ");
        throw ConfigError("config parse error at " + locate(text, e.byte) + ": " +
                          (colon == std::string::npos ? msg : msg.substr(colon + 2)));
    }

    RunConfig cfg;
    Reader r(root, "config");
    if (!r.has("scenario")) throw ConfigError("config: missing required key \"scenario\"");
    read_scenario(r.object("scenario"), cfg);
    if (r.has("simulate")) cfg.simulate = read_simulate(r.object("simulate"));
    if (r.has("sweep")) cfg.sweep = read_sweep(r.object("sweep"));
    if (r.has("optimize")) cfg.optimize = read_optimize(r.object("optimize"));
    if (r.has("output")) cfg.output = read_output(r.object("output"));
    r.finish();

    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate(const RunConfig& cfg) {
    config_check(lics_scenario_validate(&cfg.scenario), "config.scenario");

    if (cfg.simulate) {
        const auto& s = *cfg.simulate;
        if (s.samples && *s.samples < 2)
            throw ConfigError("config.simulate.samples: need at least 2 samples");
        lics_scenario covered = cfg.scenario;
        config_check(lics_scenario_cover_window(&covered), "config.scenario");
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            if (i > 0 && !(s.times[i] > s.times[i - 1]))
                throw ConfigError("config.simulate.times: must be strictly ascending");
            if (s.times[i] < covered.integrator.t_start || s.times[i] > covered.integrator.t_end)
                throw ConfigError("config.simulate.times: " + std::to_string(s.times[i]) +
                                  " lies outside the integration window");
        }
    }

    if (cfg.sweep) {
        const auto& s = *cfg.sweep;
        std::unique_ptr<lics_sweep_spec, Deleter<lics_sweep_spec, lics_sweep_spec_free>> spec(
            lics_sweep_spec_new(&cfg.scenario));
        config_check(lics_sweep_spec_set_axis(spec.get(), 1, s.axis1.path.c_str(), s.axis1.min,
                                              s.axis1.max, s.axis1.count),
                     "config.sweep.axis1");
        if (s.axis2)
            config_check(lics_sweep_spec_set_axis(spec.get(), 2, s.axis2->path.c_str(),
                                                  s.axis2->min, s.axis2->max, s.axis2->count),
                         "config.sweep.axis2");
        if (s.observables.empty())
            throw ConfigError("config.sweep.observables: no observables requested");
        for (const auto& o : s.observables)
            config_check(lics_sweep_spec_add_observable(spec.get(), o.c_str()),
                         "config.sweep.observables");
    }

    if (cfg.optimize) {
        const auto& o = *cfg.optimize;
        std::unique_ptr<lics_objective, Deleter<lics_objective, lics_objective_free>> obj(
            lics_objective_new(&cfg.scenario));
        for (const auto& t : o.targets)
            config_check(lics_objective_add_target(obj.get(), t.observable.c_str(), t.value,
                                                   t.weight),
                         "config.optimize.targets");
        for (const auto& f : o.free)
            config_check(lics_objective_add_free(obj.get(), f.path.c_str(), f.min, f.max),
                         "config.optimize.free");
        if (o.initial)
            config_check(
                lics_objective_set_initial(obj.get(), o.initial->data(), o.initial->size()),
                "config.optimize.initial");
        config_check(lics_objective_validate(obj.get()), "config.optimize");
        const std::size_t need = lics_objective_minimum_budget(obj.get());
        if (o.budget < need)
            throw ConfigError("config.optimize.budget: " + std::to_string(o.budget) +
                              " is below the minimum of " + std::to_string(need) +
                              " evaluations");
    }

    if (cfg.output.directory.empty())
        throw ConfigError("config.output.directory: must not be empty");
    if (cfg.output.formats.empty())
        throw ConfigError("config.output.formats: need at least one table format");
    for (const auto& f : cfg.output.formats) {
        if (f != "csv" && f != "tsv")
            throw ConfigError("config.output.formats: unknown format '" + f +
                              "' (expected csv or tsv)");
    }
}

json scenario_to_json(const lics_scenario& sc) {
    const auto& s = sc.schedule;
    const auto& p = sc.params;
    json schedule = {{"g_mn0", s.g_mn0},
                     {"g_nn0", s.g_nn0},
                     {"g_ff0", s.g_ff0},
                     {"delta2", s.delta2},
                     {"delta3", s.delta3},
                     {"d2", s.d2},
                     {"d3", s.d3},
                     {"e1_enabled", s.e1_enabled != 0},
                     {"e2_enabled", s.e2_enabled != 0},
                     {"e3_enabled", s.e3_enabled != 0}};
    schedule["g_nf0"] = s.g_nf_auto ? json("auto") : json(s.g_nf0);
    return {{"schedule", schedule},
            {"params",
             {{"eta_m", p.eta_m},
              {"eta_n", p.eta_n},
              {"eta_f", p.eta_f},
              {"delta_mn", p.delta_mn},
              {"delta_nf", p.delta_nf},
              {"q_nn", p.q_nn},
              {"q_ff", p.q_ff},
              {"q_nf", p.q_nf}}},
            {"init",
             {{"a_m", complex_json(sc.init.a_m)},
              {"a_n", complex_json(sc.init.a_n)},
              {"a_f", complex_json(sc.init.a_f)},
              {"W", sc.init.W}}},
            {"integrator", integrator_json(sc.integrator)}};
}

json to_json(const RunConfig& cfg) {
    json out;
    if (cfg.preset) {
        json sc = {{"preset", *cfg.preset}};
        if (!cfg.overrides.empty()) sc["overrides"] = cfg.overrides;
        if (!cfg.integrator.empty()) {
            json integ;
            for (const auto& [k, v] : cfg.integrator) {
                if (k == "max_steps") integ[k] = static_cast<std::uint64_t>(v);
                else integ[k] = v;
            }
            sc["integrator"] = integ;
        }
        out["scenario"] = sc;
    } else {
        out["scenario"] = scenario_to_json(cfg.scenario);
    }
    if (cfg.simulate) {
        if (cfg.simulate->samples) out["simulate"] = {{"samples", *cfg.simulate->samples}};
        else out["simulate"] = {{"times", cfg.simulate->times}};
    }
    if (cfg.sweep) {
        json s = {{"axis1", axis_json(cfg.sweep->axis1)},
                  {"observables", cfg.sweep->observables},
                  {"permit_partial", cfg.sweep->permit_partial}};
        if (cfg.sweep->axis2) s["axis2"] = axis_json(*cfg.sweep->axis2);
        out["sweep"] = s;
    }
    if (cfg.optimize) {
        json targets = json::array();
        for (const auto& t : cfg.optimize->targets)
            targets.push_back({{"observable", t.observable}, {"value", t.value}, {"weight", t.weight}});
        json free = json::array();
        for (const auto& f : cfg.optimize->free)
            free.push_back({{"path", f.path}, {"min", f.min}, {"max", f.max}});
        json o = {{"targets", targets},
                  {"free", free},
                  {"budget", cfg.optimize->budget},
                  {"seed", cfg.optimize->seed}};
        if (cfg.optimize->initial) o["initial"] = *cfg.optimize->initial;
        out["optimize"] = o;
    }
    out["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace licsctl
