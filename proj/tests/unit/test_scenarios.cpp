// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "lics/errors.hpp"
#include "lics/scenarios.hpp"

using namespace lics;

namespace {

double max_diff(const AmplitudeVector& a, const AmplitudeVector& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("presets carry the quoted parameter sets") {
    const auto fig2 = preset("fig2");
    CHECK(fig2.scenario.params.q_nf == 10.0);
    CHECK(fig2.scenario.params.q_nn == 0.2);
    CHECK(fig2.scenario.params.q_ff == -0.5);
    CHECK(fig2.scenario.params.delta_nf == 0.0);
    CHECK(fig2.scenario.params.eta_n == 0.0);
    CHECK(fig2.scenario.schedule.g_nn0 == 3.61);
    CHECK(fig2.scenario.schedule.g_ff0 == 9.61);
    CHECK_FALSE(fig2.scenario.schedule.e1_enabled);
    CHECK(fig2.scenario.init.a_n == cplx{1.0, 0.0});
    CHECK(fig2.scenario.init.a_m == cplx{});
    CHECK(fig2.scenario.init.a_f == cplx{});
    CHECK(fig2.scenario.init.W == 0.0);

    const auto fig4 = preset("fig4");
    CHECK(fig4.scenario.schedule.g_mn0 == 2.0);
    CHECK(fig4.scenario.params.delta_mn == 0.0);
    CHECK_FALSE(fig4.scenario.schedule.e3_enabled);
    CHECK(fig4.scenario.init.a_m == cplx{1.0, 0.0});
    CHECK(preset("fig4b").scenario.schedule.g_nn0 == 400.0);

    const auto fig5 = preset("fig5");
    CHECK(fig5.scenario.schedule.d3 == 1.6);
    CHECK(fig5.scenario.schedule.d2 == 1.0);
    CHECK(fig5.scenario.schedule.delta3 == 0.0);
    CHECK(fig5.scenario.init.a_m == cplx{1.0, 0.0});
    CHECK(preset("fig5d").scenario.schedule.delta2 == -1.5);
    CHECK(preset("fig6a").scenario.schedule.delta2 == 2.8);

    for (const auto& name : preset_names()) {
        const auto p = preset(name);
        CHECK_NOTHROW(validate(p.scenario));
        CHECK(p.name == name);
        CHECK_FALSE(p.description.empty());
    }
}

TEST_CASE("unknown preset lists the available names") {
    CHECK_THROWS_WITH_AS(preset("fig9"), doctest::Contains("fig5c"), InvalidArgument);
}

TEST_CASE("parameter paths") {
    Scenario s = preset("fig2").scenario;
    CHECK(get_parameter(s, "schedule.delta3") == -3.9);
    set_parameter(s, "params.q_nf", -4.0);
    CHECK(s.params.q_nf == -4.0);
    CHECK(get_parameter(s, "schedule.g_nf0") == doctest::Approx(std::sqrt(3.61 * 9.61)));
    set_parameter(s, "schedule.g_nf0", 0.0);
    CHECK(s.schedule.g_nf0 == 0.0);
    CHECK_THROWS_AS(get_parameter(s, "schedule.nope"), InvalidArgument);
    CHECK_THROWS_AS(set_parameter(s, "params.q_nf", NAN), InvalidArgument);
    CHECK(parameter_paths().size() == 16);
}

TEST_CASE("closed form: Rabi formula") {
    InstantCouplings c;
    c.g_mn = 2.0;
    const auto a = constant_coefficient_solution(c, {}, {1.0, 0.0, 0.0}, std::numbers::pi / 8);
    CHECK(std::norm(a[0]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(a[1]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed form: dark state survives, bright state decays") {
    // Eigenvalues of -[[1, 1], [1, 1]] are 0 (dark, (1,-1)/sqrt2) and -2 (bright).
    InstantCouplings c{0.0, 1.0, 1.0, 1.0};
    const auto a = constant_coefficient_solution(c, {}, {0.0, 1.0, 0.0}, 50.0);
    CHECK(a[1].real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a[2].real() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(a[1].imag()) < 1e-12);
    CHECK(std::abs(a[0]) < 1e-12);
}

TEST_CASE("closed form: identity at zero time") {
    testing::Generator gen(4);
    const auto s = gen.unit_state();
    const AmplitudeVector init{s.a_m, s.a_n, s.a_f};
    CHECK(constant_coefficient_solution(gen.constant_couplings(), gen.lossless_params(), init,
                                        0.0) == init);
}

TEST_CASE("closed form: defective matrix at the exceptional point") {
    // m-n block [[0, -i g], [-i g, -2 g]] = -g I + N with N^2 = 0, so
    // exp(M t) = e^{-g t} (I + t N), N = [[g, -i g], [-i g, -g]].
    const double g = 0.7, t = 1.9;
    InstantCouplings c{g, 2 * g, 0.0, 0.0};
    const AmplitudeVector init{cplx{0.6, 0.0}, cplx{0.0, 0.8}, cplx{0.0, 0.0}};
    const cplx I{0.0, 1.0};
    const double e = std::exp(-g * t);
    const AmplitudeVector expected{e * ((1.0 + t * g) * init[0] - I * t * g * init[1]),
                                   e * (-I * t * g * init[0] + (1.0 - t * g) * init[1]), 0.0};
    CHECK(max_diff(constant_coefficient_solution(c, {}, init, t), expected) < 1e-9);
    CHECK(max_diff(constant_coefficient_solution_putzer(c, {}, init, t), expected) < 1e-9);
}

TEST_CASE("closed form: fully degenerate diagonal matrix") {
    SystemParams p;
    p.eta_m = p.eta_n = p.eta_f = 0.3;
    const AmplitudeVector init{0.5, cplx{0.0, 0.5}, 0.5};
    const auto a = constant_coefficient_solution_putzer({}, p, init, 2.0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - std::exp(-0.6) * init[i]) < 1e-14);
}

TEST_CASE("property: eigen and Putzer routes agree") {
    testing::Generator gen(17);
    for (int k = 0; k < 200; ++k) {
        const auto c = gen.constant_couplings();
        SystemParams p = gen.lossless_params();
        p.eta_m = gen.uniform(0.0, 0.5);
        p.delta_nf = gen.uniform(-3.0, 3.0);
        const auto s = gen.unit_state();
        const double t = gen.uniform(0.0, 4.0);
        const AmplitudeVector init{s.a_m, s.a_n, s.a_f};
        CHECK(max_diff(constant_coefficient_solution(c, p, init, t),
                       constant_coefficient_solution_putzer(c, p, init, t)) < 1e-9);
    }
}

TEST_CASE("property: semigroup composition") {
    testing::Generator gen(23);
    for (int k = 0; k < 100; ++k) {
        const auto c = gen.constant_couplings();
        SystemParams p = gen.lossless_params();
        p.eta_f = gen.uniform(0.0, 0.5);
        const auto s = gen.unit_state();
        const AmplitudeVector init{s.a_m, s.a_n, s.a_f};
        const double t1 = gen.uniform(0.0, 2.0), t2 = gen.uniform(0.0, 2.0);
        const auto direct = constant_coefficient_solution(c, p, init, t1 + t2);
        const auto composed = constant_coefficient_solution(
            c, p, constant_coefficient_solution(c, p, init, t1), t2);
        CHECK(max_diff(direct, composed) < 1e-10);
    }
}

TEST_CASE("two-pulse transfer convenience wrapper") {
    const Scenario base = preset("fig2").scenario;

    SUBCASE("no fields: nothing happens") {
        Scenario s = base;
        s.schedule.g_nn0 = 0.0;
        s.schedule.g_ff0 = 0.0;
        const auto out = two_pulse_lics(s, -3.9);
        CHECK(out.pop_n == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out.pop_f == 0.0);
        CHECK(out.W == 0.0);
    }

    SUBCASE("interference switched off: n bleeds out, f stays empty") {
        Scenario s = base;
        s.schedule.g_nf0 = 0.0;
        const Scenario run = with_covering_window(s);
        const double a = run.integrator.t_start, b = run.integrator.t_end;
        // |a_n|^2 = exp(-2 * integral of g_nn) with the Gaussian integral in erf form.
        const double area = s.schedule.g_nn0 * s.schedule.d2 * std::sqrt(std::numbers::pi) / 2 *
                            (std::erf((b - 0.0) / s.schedule.d2) - std::erf((a - 0.0) / s.schedule.d2));
        const auto out = two_pulse_lics(s, 0.0);
        CHECK(out.pop_f == 0.0);
        CHECK(out.pop_n == doctest::Approx(std::exp(-2 * area)).epsilon(1e-6));
        CHECK(out.W == doctest::Approx(1.0 - std::exp(-2 * area)).epsilon(1e-8));
    }

    SUBCASE("counterintuitive delay transfers most of n to f") {
        const auto out = two_pulse_lics(base, -3.9);
        CHECK(out.pop_f > 0.6);
        CHECK(out.pop_f + out.W + out.pop_n == doctest::Approx(1.0).epsilon(1e-6));
    }
}
