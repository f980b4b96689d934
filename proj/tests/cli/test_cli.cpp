// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"
#include "tables.hpp"

using namespace licsctl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("licsctl-test-" + std::to_string(::getpid()) + "-" + tag + "-" +
                          std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::vector<std::vector<double>> read_csv_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream fields(line);
        std::string f;
        while (std::getline(fields, f, ',')) row.push_back(std::strtod(f.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LICSCTL_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kFullConfig = R"({
  "scenario": {"preset": "fig2", "overrides": {"schedule.delta3": -3.5, "params.q_nf": 8},
               "integrator": {"rel_tol": 1e-9, "max_steps": 300000}},
  "simulate": {"times": [-2, 0, 2.5]},
  "sweep": {"axis1": {"path": "schedule.delta3", "min": -6, "max": 2, "count": 5},
            "axis2": {"path": "T", "min": -8, "max": 8, "count": 3},
            "observables": ["W", "pop_f"], "permit_partial": true},
  "optimize": {"targets": [{"observable": "W", "value": 0.0, "weight": 2}],
               "free": [{"path": "schedule.delta3", "min": -6, "max": 2}],
               "budget": 50, "seed": 9, "initial": [-4]},
  "output": {"directory": "somewhere", "formats": ["tsv", "csv"]}
})";

const char* kExplicitConfig = R"({
  "scenario": {
    "schedule": {"g_mn0": 2, "g_nn0": 0.25, "g_ff0": 0.36, "g_nf0": 0.2, "delta2": 0.5,
                 "delta3": 0, "d2": 1, "d3": 1.6, "e1_enabled": true, "e2_enabled": true,
                 "e3_enabled": false},
    "params": {"eta_m": 0.1, "q_nn": 0.2, "q_ff": -0.5, "q_nf": 10, "delta_nf": 0.3},
    "init": {"a_m": [0.6, 0.0], "a_n": [0.0, 0.8]},
    "integrator": {"t_start": -9, "t_end": 9}
  },
  "simulate": {"samples": 7}
})";

}  // namespace

TEST_CASE("configs round-trip through their echo") {
    for (const char* text : {kFullConfig, kExplicitConfig}) {
        const RunConfig a = parse_config(text);
        const RunConfig b = parse_config(dump(to_json(a)));
        CHECK(a == b);
        CHECK(dump(to_json(a)) == dump(to_json(b)));
    }
    const RunConfig full = parse_config(kFullConfig);
    CHECK(full.scenario.schedule.delta3 == -3.5);
    CHECK(full.scenario.params.q_nf == 8.0);
    CHECK(full.scenario.integrator.rel_tol == 1e-9);
    CHECK(full.scenario.integrator.max_steps == 300000);
    CHECK(full.optimize->initial->at(0) == -4.0);

    const RunConfig ex = parse_config(kExplicitConfig);
    CHECK(ex.scenario.schedule.g_nf_auto == 0);
    CHECK(ex.scenario.init.a_n.im == 0.8);
    CHECK(ex.scenario.init.a_f.re == 0.0);
    CHECK(ex.scenario.params.eta_n == 0.0);
}

TEST_CASE("property: random explicit scenarios round-trip exactly") {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        RunConfig cfg;
        lics_default_scenario(&cfg.scenario);
        auto& s = cfg.scenario;
        s.schedule.g_mn0 = 5 * std::abs(u(rng));
        s.schedule.g_nn0 = 5 * std::abs(u(rng));
        s.schedule.g_ff0 = 5 * std::abs(u(rng));
        s.schedule.g_nf_auto = k % 2;
        s.schedule.g_nf0 = s.schedule.g_nf_auto ? 0.0 : std::sqrt(s.schedule.g_nn0 * s.schedule.g_ff0) * std::abs(u(rng));
        s.schedule.delta2 = 4 * u(rng);
        s.schedule.delta3 = 4 * u(rng);
        s.schedule.d2 = 1.0 + 0.5 * u(rng);
        s.schedule.e3_enabled = k % 3 != 0;
        s.params.q_nf = 10 * u(rng);
        s.params.delta_nf = u(rng) / 3.0;
        const double th = 3.0 * u(rng);
        s.init = lics_state{};
        s.init.a_m = {std::cos(th) * 0.6, std::sin(th) * 0.6};
        s.init.a_f = {0.0, 0.8 * std::abs(u(rng))};
        cfg.simulate = SimulateBlock{static_cast<std::size_t>(2 + k), {}};
        const std::string text = dump(to_json(cfg));
        const RunConfig back = parse_config(text);
        CHECK(back == cfg);
    }
}

TEST_CASE("strict parsing") {
    auto fails_with = [](const std::string& text, const std::string& needle) {
        try {
            (void)parse_config(text);
        } catch (const ConfigError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            return;
        }
        FAIL("expected ConfigError for: " << text);
    };
    fails_with(R"({"scenario": {"preset": "fig2"}, "extra": 1})", "config.extra: unknown key");
    fails_with(R"({"scenario": {"preset": "fig2", "integrator": {"reltol": 1}}})",
               "config.scenario.integrator.reltol: unknown key");
    fails_with(R"({"scenario": {"schedule": {"g_mn": 1}}})", "config.scenario.schedule.g_mn");
    fails_with(R"({"scenario": {"preset": "fig2", "schedule": {}}})", "mutually exclusive");
    fails_with(R"({"scenario": {"preset": "fig2", "preset": "fig4"}})", "duplicate key");
    fails_with("{\"scenario\": {\n  \"preset\": \"fig2\",\n}}", "line 3, column 1");
    fails_with(R"({"scenario": {"preset": "fig9"}})", "fig2");
    fails_with(R"({"scenario": {"preset": "fig2", "overrides": {"schedule.bogus": 1}}})",
               "schedule.bogus");
    fails_with(R"({"scenario": {"preset": "fig2", "overrides": {"schedule.g_nf0": 100}}})",
               "config.scenario");
    fails_with(R"({"scenario": {"schedule": {"d2": -1}}})", "config.scenario");
    fails_with(R"({"scenario": {"init": {"a_m": 1, "a_n": 1}}})", "config.scenario");
    fails_with(R"({"scenario": {"schedule": {"g_mn0": "2"}}})", "expected a number");
    fails_with(R"({"scenario": {"schedule": {"e1_enabled": 1}}})", "expected true or false");
    fails_with(R"({"scenario": {"preset": "fig2"}, "simulate": {"samples": 1}})", "at least 2");
    fails_with(R"({"scenario": {"preset": "fig2"}, "simulate": {"samples": -3}})",
               "non-negative integer");
    fails_with(R"({"scenario": {"preset": "fig2"}, "simulate": {"times": [1, 0]}})", "ascending");
    fails_with(R"({"scenario": {"preset": "fig2"}, "simulate": {"times": [50]}})", "outside");
    fails_with(R"({"scenario": {"preset": "fig2"}, "sweep": {"axis1": {"path": "schedule.delta3",
               "min": 0, "max": 1, "count": 1}, "observables": ["W"]}})", "config.sweep.axis1");
    fails_with(R"({"scenario": {"preset": "fig2"}, "sweep": {"axis1": {"path": "T",
               "min": 0, "max": 1, "count": 3}, "observables": ["W"]}})", "axis 2");
    fails_with(R"({"scenario": {"preset": "fig2"}, "sweep": {"axis1": {"path": "schedule.delta3",
               "min": 0, "max": 1, "count": 3}, "observables": []}})", "no observables requested");
    fails_with(R"({"scenario": {"preset": "fig2"}, "sweep": {"axis1": {"path": "schedule.delta3",
               "min": 0, "max": 1, "count": 3}, "observables": ["Q"]}})", "config.sweep.observables");
    fails_with(R"({"scenario": {"preset": "fig2"}, "optimize": {"targets": [{"observable": "W",
               "value": 0}], "free": [{"path": "schedule.delta3", "min": -6, "max": 2}],
               "budget": 0}})", "below the minimum");
    fails_with(R"({"scenario": {"preset": "fig2"}, "optimize": {"targets": [{"observable": "W",
               "value": 2}], "free": [{"path": "schedule.delta3", "min": -6, "max": 2}]}})",
               "config.optimize");
    fails_with(R"({"scenario": {"preset": "fig2"}, "optimize": {"targets": [{"observable": "W",
               "value": 0}], "free": [{"path": "schedule.delta3", "min": 2, "max": -6}]}})",
               "config.optimize");
    fails_with(R"({"scenario": {"preset": "fig2"}, "output": {"formats": ["xlsx"]}})", "xlsx");
    fails_with(R"([1, 2])", "expected an object");
}

TEST_CASE("simulate writes the trajectory table and summary") {
    const fs::path dir = fresh_dir("sim");
    RunConfig cfg = parse_config(R"({"scenario": {"preset": "fig5", "overrides":
        {"schedule.delta2": -1.5}}, "simulate": {"samples": 33}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    std::ostringstream log;
    cmd_simulate(cfg, opts, log);
    const auto rows = read_csv_rows(dir / "trajectory.csv");
    REQUIRE(rows.size() == 33);
    CHECK(rows.front()[0] == -8.0);
    CHECK(rows.back()[0] == 8.0);
    for (const auto& r : rows) {
        REQUIRE(r.size() == 12);
        CHECK(std::abs(r[7] - (r[1] * r[1] + r[2] * r[2])) < 1e-8);
        CHECK(std::abs(r[11] - 1.0) < 1e-5);
    }
    const json summary = read_json(dir / "summary.json");
    const json& fin = summary["final"];
    CHECK(fin["pop_f"].get<double>() + fin["W"].get<double>() >
          3 * (fin["pop_m"].get<double>() + fin["pop_n"].get<double>()));
    CHECK(summary["conservation_residual"].get<double>() < 1e-6);
    CHECK(summary["lossless"].get<bool>());
    CHECK(parse_config(dump(summary["config"])) == cfg);
}

TEST_CASE("all pulses disabled: the ground state stays put") {
    const fs::path dir = fresh_dir("dark");
    RunConfig cfg = parse_config(R"({"scenario": {"schedule": {"e1_enabled": false,
        "e2_enabled": false, "e3_enabled": false, "g_mn0": 2, "g_nn0": 3}},
        "simulate": {"samples": 21}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    std::ostringstream log;
    cmd_simulate(cfg, opts, log);
    const auto rows = read_csv_rows(dir / "trajectory.csv");
    REQUIRE(rows.size() == 21);
    for (const auto& r : rows) {
        CHECK(r[7] == 1.0);
        CHECK(r[10] == 0.0);
    }
}

TEST_CASE("sweep matrices re-parse to the computed grid") {
    const fs::path dir = fresh_dir("sweep");
    RunConfig cfg = parse_config(R"({"scenario": {"preset": "fig5"},
        "sweep": {"axis1": {"path": "schedule.delta2", "min": -3, "max": 3, "count": 7},
                  "axis2": {"path": "schedule.delta3", "min": -2, "max": 2, "count": 5},
                  "observables": ["W", "pop_f", "sum_total"]},
        "output": {"formats": ["csv", "tsv"]}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    opts.workers = 3;
    std::ostringstream log;
    cmd_sweep(cfg, opts, log);

    const json summary = read_json(dir / "sweep.json");
    CHECK(summary["rows"] == 7);
    CHECK(summary["cols"] == 5);
    for (const std::string name : {"W", "pop_f", "sum_total"}) {
        for (const std::string fmt : {"csv", "tsv"}) {
            std::ifstream in(dir / (name + "." + fmt));
            const MatrixTable m = read_matrix(in, delimiter_for(fmt));
            CHECK(m.meta.at("observable") == name);
            CHECK(m.meta.at("axis1") == "schedule.delta2");
            CHECK(m.meta.at("failed") == "0");
            REQUIRE(m.axis1.size() == 7);
            REQUIRE(m.axis2.size() == 5);
            CHECK(m.axis2[4] == 2.0);
            const json& grid = summary["matrices"][name];
            for (std::size_t i = 0; i < 7; ++i) {
                for (std::size_t j = 0; j < 5; ++j) {
                    const double exact = grid[i][j].get<double>();
                    const double rounded = std::strtod(format_value(exact).c_str(), nullptr);
                    CHECK(m.cells[i * 5 + j] == rounded);
                    CHECK(std::abs(m.cells[i * 5 + j] - exact) <= 5e-9 * std::abs(exact));
                }
            }
        }
    }
    std::ifstream in(dir / "sum_total.csv");
    for (double v : read_matrix(in, ',').cells) CHECK(std::abs(v - 1.0) < 1e-5);
    CHECK(fs::exists(dir / "axes.csv"));
}

TEST_CASE("sweep files do not depend on the worker count") {
    const char* text = R"({"scenario": {"preset": "fig2"},
        "sweep": {"axis1": {"path": "schedule.delta3", "min": -6, "max": 2, "count": 9},
                  "axis2": {"path": "T", "min": -8, "max": 8, "count": 9},
                  "observables": ["W", "pop_n"]}})";
    const RunConfig cfg = parse_config(text);
    std::vector<std::string> contents;
    for (unsigned w : {1u, 2u, 5u}) {
        const fs::path dir = fresh_dir("workers");
        RunOptions opts;
        opts.out_dir = dir.string();
        opts.workers = w;
        std::ostringstream log;
        cmd_sweep(cfg, opts, log);
        contents.push_back(slurp(dir / "W.csv") + slurp(dir / "pop_n.csv"));
    }
    CHECK(contents[0] == contents[1]);
    CHECK(contents[0] == contents[2]);
}

TEST_CASE("degenerate 2x2 sweep gives four identical cells") {
    const fs::path dir = fresh_dir("degenerate");
    const RunConfig cfg = parse_config(R"({"scenario": {"preset": "fig5"},
        "sweep": {"axis1": {"path": "schedule.delta2", "min": 0.3, "max": 0.3, "count": 2},
                  "axis2": {"path": "params.q_nf", "min": 4, "max": 4, "count": 2},
                  "observables": ["pop_n"]}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    std::ostringstream log;
    cmd_sweep(cfg, opts, log);
    std::ifstream in(dir / "pop_n.csv");
    const auto m = read_matrix(in, ',');
    REQUIRE(m.cells.size() == 4);
    for (double v : m.cells) CHECK(v == m.cells[0]);
}

TEST_CASE("a preset without a sweep block uses its own axes") {
    const fs::path dir = fresh_dir("preset-sweep");
    const RunConfig cfg = parse_config(R"({"scenario": {"preset": "fig3b",
        "overrides": {"schedule.delta3": -3.0}}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    std::ostringstream log;
    cmd_sweep(cfg, opts, log);
    const json summary = read_json(dir / "sweep.json");
    CHECK(summary["axis1"]["path"] == "params.delta_nf");
    CHECK(summary["rows"] == 201);
    CHECK(summary["axis2"].is_null());
}

TEST_CASE("optimize echo reproduces the optimum") {
    const fs::path dir = fresh_dir("opt");
    const RunConfig cfg = parse_config(R"({"scenario": {"preset": "fig2"},
        "optimize": {"targets": [{"observable": "pop_f", "value": 0.8},
                                 {"observable": "W", "value": 0.0}],
                     "free": [{"path": "schedule.delta3", "min": -6, "max": 2}],
                     "budget": 150, "seed": 4}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    std::ostringstream log;
    cmd_optimize(cfg, opts, log);
    const json result = read_json(dir / "optimize.json");
    CHECK(result["achieved"]["pop_f"].get<double>() >= 0.7);
    CHECK(result["trace"].size() == result["evaluations"].get<std::size_t>());

    const RunConfig echo = load_config((dir / "optimum_simulate.json").string());
    CHECK(parse_config(dump(result["simulate_config"])) == echo);
    CHECK(echo.scenario.schedule.delta3 == result["best"][0]["value"].get<double>());
    cmd_simulate(echo, RunOptions{}, log);
    const json summary = read_json(dir / "optimum" / "summary.json");
    for (const char* k : {"pop_m", "pop_n", "pop_f", "W"})
        CHECK(std::abs(summary["final"][k].get<double>() - result["achieved"][k].get<double>()) <=
              1e-9);
}

TEST_CASE("optimize toward full dissociation matches a brute-force scan") {
    const fs::path dir = fresh_dir("opt-w1");
    const RunConfig cfg = parse_config(R"({"scenario": {"preset": "fig2"},
        "optimize": {"targets": [{"observable": "W", "value": 1.0}],
                     "free": [{"path": "schedule.delta3", "min": -6, "max": 2}],
                     "budget": 200}})");
    RunOptions opts;
    opts.out_dir = dir.string();
    std::ostringstream log;
    cmd_optimize(cfg, opts, log);
    const double achieved = read_json(dir / "optimize.json")["achieved"]["W"].get<double>();

    lics_scenario s = cfg.scenario;
    double scan_max = 0.0;
    for (int i = 0; i <= 160; ++i) {
        s.schedule.delta3 = -6.0 + 8.0 * i / 160;
        lics_observables o;
        REQUIRE(lics_evaluate(&s, &o) == LICS_OK);
        scan_max = std::max(scan_max, o.W);
    }
    CHECK(achieved >= scan_max - 0.02);
}

TEST_CASE("exit codes") {
    const fs::path dir = fresh_dir("exit");
    CHECK(run_cli("presets") == 0);
    CHECK(run_cli("simulate") == 2);
    CHECK(run_cli("simulate --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("frobnicate") == 2);

    write(dir / "ok.json", R"({"scenario": {"preset": "fig2"}, "simulate": {"samples": 3}})");
    CHECK(run_cli("simulate --config " + (dir / "ok.json").string() + " --out " +
                  (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "summary.json"));

    write(dir / "syntax.json", "{\"scenario\": ");
    CHECK(run_cli("simulate --config " + (dir / "syntax.json").string()) == 2);

    write(dir / "budget.json", R"({"scenario": {"preset": "fig2"}, "optimize": {"targets":
        [{"observable": "W", "value": 0}], "free": [{"path": "schedule.delta3", "min": -6,
        "max": 2}], "budget": 0}})");
    CHECK(run_cli("optimize --config " + (dir / "budget.json").string()) == 2);

    write(dir / "stiff.json", R"({"scenario": {"preset": "fig4", "overrides":
        {"schedule.g_nn0": 1e16}, "integrator": {"max_steps": 20000}},
        "simulate": {"samples": 3}})");
    CHECK(run_cli("simulate --config " + (dir / "stiff.json").string() + " --out " +
                  (dir / "stiff").string()) == 3);

    write(dir / "partial.json", R"({"scenario": {"preset": "fig4", "integrator":
        {"max_steps": 20000}}, "sweep": {"axis1": {"path": "schedule.g_nn0", "min": 1,
        "max": 1e16, "count": 2}, "observables": ["W"]}})");
    const std::string partial = "sweep --config " + (dir / "partial.json").string() + " --out " +
                                (dir / "partial").string();
    CHECK(run_cli(partial) == 3);
    CHECK(run_cli(partial + " --permit-partial") == 0);
    std::ifstream in(dir / "partial" / "W.csv");
    const auto m = read_matrix(in, ',');
    CHECK(m.meta.at("failed") == "1");
    CHECK(std::isnan(m.cells[1]));
    CHECK(std::isfinite(m.cells[0]));
    CHECK(read_json(dir / "partial" / "sweep.json")["partial"].get<bool>());
}
