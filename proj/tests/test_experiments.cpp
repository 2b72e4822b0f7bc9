#include "catch_amalgamated.hpp"

#include <cmath>
#include <string>

#include "fixtures.hpp"
#include "fluxres/config.hpp"
#include "fluxres/experiments.hpp"

using namespace fluxres;
using Catch::Approx;

namespace {

Scenario fig1_scenario() {
    Scenario s;
    s.params = test::fig1_params();
    s.drive = test::fig1_drive();
    s.init = EnergyInit{1.0};
    s.horizon = {0, 10};
    s.window = TimeInterval{0, 10};
    return s;
}

Scenario fig3_scenario() {
    Scenario s;
    s.params = test::fig3_params();
    s.drive = PowerOfOmegaDrive{0.4, 1.5};
    s.init = EnergyInit{2.0};
    s.horizon = {100, 120};
    s.window = TimeInterval{100, 120};
    return s;
}

Scenario adiabatic_scenario() {
    Scenario s;
    s.params = test::adiabatic_params();
    s.drive = SinusoidDrive{0.2, 0.3, 0.0};
    s.init = EnergyInit{1.0};
    s.horizon = {0, 100};
    return s;
}

bool same_series(const InvariantSeries &a, const InvariantSeries &b) {
    return a.size() == b.size() && (a.times.array() == b.times.array()).all() &&
           (a.values.array() == b.values.array()).all();
}

}  // namespace

TEST_CASE("apply_axis sets the named field", "[experiments][axes]") {
    const auto base = fig1_scenario();
    CHECK(apply_axis(base, "omega_p", 5).params.omega_p == 5);
    CHECK(apply_axis(base, "lambda", 0.3).params.lambda_corr == 0.3);
    CHECK(std::get<SinusoidDrive>(apply_axis(base, "omega_d", 10).drive).omega_d == 10);
    CHECK(std::get<SinusoidDrive>(apply_axis(base, "xi0", 0.5).drive).xi0 == 0.5);
    CHECK(std::get<EnergyInit>(apply_axis(base, "e0", 2).init).e0 == 2);

    const auto f3 = fig3_scenario();
    CHECK(std::get<PowerOfOmegaDrive>(apply_axis(f3, "delta", 1).drive).exponent == 2.5);
    CHECK(std::get<PowerOfOmegaDrive>(apply_axis(f3, "exponent", 1).drive).exponent == 1.0);

    CHECK_THROWS_AS(apply_axis(base, "delta", 1), InvalidArgument);
    CHECK_THROWS_AS(apply_axis(base, "gamma", 1), InvalidArgument);
    CHECK_THROWS_AS(apply_axis(base, "omega_p", NAN), InvalidArgument);
    for (const auto &axis : sweep_axes()) CHECK_FALSE(axis.empty());
}

TEST_CASE("Fig. 1 sweeps", "[experiments][sweep]") {
    const auto by_pump = run_sweep({fig1_scenario(), "omega_p", {1, 5, 10}, false});
    REQUIRE(by_pump.points.size() == 3);
    CHECK(by_pump.axis == "omega_p");
    CHECK(by_pump.points[0].value == 1);
    CHECK(by_pump.points[2].value == 10);
    CHECK(by_pump.points[1].metrics.rms_dev == Approx(0.3433949146858733).epsilon(1e-12));
    CHECK(by_pump.points[2].metrics.rms_dev == Approx(0.34140619303264136).epsilon(1e-12));

    const auto by_drive = run_sweep({fig1_scenario(), "omega_d", {1, 5, 10}, false});
    CHECK(by_drive.points[1].metrics.rms_dev == Approx(0.35576566289890765).epsilon(1e-12));
    CHECK(by_drive.points[2].metrics.rms_dev == Approx(0.35578491108835925).epsilon(1e-12));
}

TEST_CASE("Fig. 2 sweep", "[experiments][sweep]") {
    auto base = fig1_scenario();
    base.params.omega_p = 10;
    base.drive = SinusoidDrive{0.2, 10, 0.0};
    base.integrator.sample_dt = 0.001;
    const auto r = run_sweep({base, "xi0", {1.0, 0.2, 0.5}, false});
    REQUIRE(r.points.size() == 3);
    CHECK(r.points[0].value == 0.2);
    CHECK(r.points[0].metrics.rms_dev < r.points[1].metrics.rms_dev);
    CHECK(r.points[1].metrics.rms_dev < r.points[2].metrics.rms_dev);
}

TEST_CASE("Fig. 3 sweep orders the late-window drift", "[experiments][sweep]") {
    const auto r = run_sweep({fig3_scenario(), "delta", {0, 1, 2}, false});
    REQUIRE(r.points.size() == 3);
    CHECK(r.points[0].metrics.peak_to_peak < 1e-6);
    CHECK(r.points[0].metrics.peak_to_peak < r.points[1].metrics.peak_to_peak);
    CHECK(r.points[1].metrics.peak_to_peak < r.points[2].metrics.peak_to_peak);
}

TEST_CASE("sweep results do not depend on the order of values", "[experiments][property]") {
    auto base = adiabatic_scenario();
    base.horizon = {0, 60};
    base.window = TimeInterval{10, 60};
    const auto a = run_sweep({base, "omega_d", {0.3, 0.1, 0.2}, true});
    const auto b = run_sweep({base, "omega_d", {0.2, 0.3, 0.1}, true});
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].value == b.points[i].value);
        CHECK(same_series(a.points[i].closed_form, b.points[i].closed_form));
        REQUIRE(a.points[i].numerical);
        CHECK(same_series(*a.points[i].numerical, *b.points[i].numerical));
        CHECK(a.points[i].metrics.rms_dev == b.points[i].metrics.rms_dev);
        CHECK(a.points[i].numerical_metrics->rms_dev == b.points[i].numerical_metrics->rms_dev);
    }
}

TEST_CASE("every sweep point replays from its provenance", "[experiments][property]") {
    const auto r = run_sweep({fig1_scenario(), "omega_d", {1, 5, 10}, false});
    for (const auto &point : r.points) {
        const nlohmann::json record = provenance(to_json(point.resolved));
        const auto text = record.dump();
        const auto parsed = nlohmann::json::parse(text);
        CHECK(parsed["config_hash"] == config_hash(parsed["config"]));
        const auto replay = evaluate_scenario(scenario_from_json(parsed["config"]), false, point.value);
        CHECK(same_series(replay.closed_form, point.closed_form));
        CHECK(replay.metrics.rms_dev == point.metrics.rms_dev);
        CHECK(replay.metrics.peak_to_peak == point.metrics.peak_to_peak);
    }
}

TEST_CASE("sweep input errors", "[experiments][errors]") {
    CHECK_THROWS_AS(run_sweep({fig1_scenario(), "omega_p", {}, false}), InvalidArgument);
    CHECK_THROWS_AS(run_sweep({fig1_scenario(), "omega_p", {1, 1}, false}), InvalidArgument);
    CHECK_THROWS_AS(run_sweep({fig1_scenario(), "nope", {1}, false}), InvalidArgument);
    try {
        run_sweep({fig1_scenario(), "epsilon", {0.1, 5.0}, false});
        FAIL("expected NonPositiveFrequencySquared");
    } catch (const NonPositiveFrequencySquared &e) {
        CHECK_THAT(std::string(e.what()), Catch::Matchers::StartsWith("epsilon = 5"));
    }
}

TEST_CASE("convergence ladder on an adiabatic base", "[experiments][convergence]") {
    const auto rows = run_convergence_study(adiabatic_scenario(), 3);
    REQUIRE(rows.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(rows[k].rung == k);
        CHECK(rows[k].scale == std::ldexp(1.0, -k));
        CHECK(rows[k].cycles >= 3);
    }
    CHECK(rows[1].max_rel_discrepancy < rows[0].max_rel_discrepancy);
    CHECK(rows[2].max_rel_discrepancy < rows[1].max_rel_discrepancy);
    CHECK(rows[2].max_rel_discrepancy < 0.01);
}

TEST_CASE("convergence rung without pump or drive", "[experiments][convergence]") {
    auto s = adiabatic_scenario();
    s.params.epsilon = 0;
    s.drive = ZeroDrive{};
    SECTION("undamped: exact") {
        s.params.damped = false;
        CHECK(energy_discrepancy(s).max_rel_discrepancy < 1e-6);
    }
    SECTION("damped: the cycle average sits above the exponential by the ripple factor") {
        const double g = s.params.omega_r / s.params.q_factor;
        const double ripple = 1 / (1 - g * g / 4) - 1;
        CHECK(energy_discrepancy(s).max_rel_discrepancy == Approx(ripple).epsilon(1e-3));
    }
}

TEST_CASE("single-rung study", "[experiments][convergence]") {
    CHECK(run_convergence_study(adiabatic_scenario(), 1).size() == 1);
    CHECK_THROWS_AS(run_convergence_study(adiabatic_scenario(), 0), InvalidArgument);
    auto s = adiabatic_scenario();
    s.params.alpha = 0.1;
    CHECK_THROWS_AS(run_convergence_study(s, 3), InvalidArgument);
}
