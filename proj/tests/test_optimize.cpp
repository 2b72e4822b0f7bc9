#include "catch_amalgamated.hpp"

#include <cmath>

#include "fixtures.hpp"
#include "fluxres/golden_section.hpp"
#include "fluxres/invariant.hpp"
#include "fluxres/optimize.hpp"

using namespace fluxres;
using Catch::Approx;

namespace {

TimeInterval late_window(const ResonatorParams &p, double from, double to) {
    const double tau = p.q_factor / p.omega_r;
    return {from * tau, to * tau};
}

}  // namespace

TEST_CASE("golden-section search on a parabola", "[optimize][golden]") {
    int seen = 0;
    const auto r = golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3) + 2; }, -1.0,
                                           4.0, 1e-6, [&](double, double) { ++seen; });
    CHECK(r.x == Approx(0.3).margin(1e-6));
    CHECK(r.fx == Approx(2.0).epsilon(1e-12));
    CHECK(r.hi - r.lo <= 1e-6);
    CHECK(r.x >= r.lo);
    CHECK(r.x <= r.hi);
    CHECK(r.evaluations == seen);
}

TEST_CASE("drift objective on the Fig. 3 preset", "[optimize][objective]") {
    const auto p = test::fig3_params();
    const auto w = late_window(p, 20, 24);
    CHECK(drift_objective(p, EnergyInit{2.0}, 0.4, 1.5, w) < 1e-6);
    CHECK(drift_objective(p, EnergyInit{2.0}, 0.4, 2.5, w) > 1e-2);
    test::ParamGenerator gen(3);
    for (int i = 0; i < 20; ++i)
        CHECK(drift_objective(p, EnergyInit{2.0}, 0.4, gen.uniform(0, 4), w) >= 0);
}

TEST_CASE("without drive the objective ignores the exponent", "[optimize][objective]") {
    const auto p = test::fig3_params();
    const auto w = late_window(p, 2, 4);
    const double tail = drift_metrics(
        invariant_series_closed_form(p, ZeroDrive{}, EnergyInit{2.0}, w, 0.01), w).peak_to_peak;
    REQUIRE(tail > 0);
    for (double exponent : {0.5, 1.5, 2.7})
        CHECK(drift_objective(p, EnergyInit{2.0}, 0.0, exponent, w) == tail);
}

TEST_CASE("optimal exponent on the Fig. 3 preset", "[optimize][search]") {
    const auto p = test::fig3_params();
    const auto r = find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {0.5, 3.0}, 1e-3, late_window(p, 20, 24));
    CHECK(std::abs(r.p_star - 1.5) <= 0.05);
    CHECK(std::abs(r.p_star - 1.5) <= 1e-3);
    CHECK(r.bracket.hi - r.bracket.lo <= 1e-3);
    CHECK(r.p_star >= r.bracket.lo);
    CHECK(r.p_star <= r.bracket.hi);
    CHECK(r.evaluations == static_cast<int>(r.trace.size()));
    CHECK(r.trace.size() > 16);
    for (const auto &[x, f] : r.trace) {
        CHECK(f >= r.objective_at_p_star - 1e-15);
        if (x >= r.bracket.lo && x <= r.bracket.hi) CHECK(r.objective_at_p_star <= f);
    }
}

TEST_CASE("pre-bracketed search", "[optimize][search]") {
    const auto p = test::fig3_params();
    const auto r = find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {1.4, 1.6}, 1e-3, late_window(p, 20, 24));
    CHECK(std::abs(r.p_star - 1.5) <= 1e-3);
    CHECK(r.objective_at_p_star < 1e-6);
}

TEST_CASE("zero drive amplitude gives a flat objective", "[optimize][errors]") {
    const auto p = test::fig3_params();
    CHECK_THROWS_AS(find_optimal_exponent(p, EnergyInit{2.0}, 0.0, {0.5, 3.0}, 1e-3, late_window(p, 20, 24)),
                    FlatObjective);
    CHECK_THROWS_WITH(
        find_optimal_exponent(p, EnergyInit{2.0}, 0.0, {0.5, 3.0}, 1e-3, late_window(p, 20, 24)),
        Catch::Matchers::StartsWith("flat objective"));
}

TEST_CASE("search arguments are checked", "[optimize][errors]") {
    const auto p = test::fig3_params();
    const auto w = late_window(p, 20, 24);
    CHECK_THROWS_AS(find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {2.0, 1.0}, 1e-3, w), InvalidArgument);
    CHECK_THROWS_AS(find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {0.5, 3.0}, 0.0, w), InvalidArgument);
}

TEST_CASE("minimizer does not depend on the drive amplitude", "[optimize][property]") {
    const auto p = test::fig3_params();
    const auto w = late_window(p, 20, 24);
    const double reference = find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {0.5, 3.0}, 1e-3, w).p_star;
    for (double c : {0.25, 3.0, 10.0}) {
        const double scaled = find_optimal_exponent(p, EnergyInit{2.0}, 0.4 * c, {0.5, 3.0}, 1e-3, w).p_star;
        CHECK(std::abs(scaled - reference) <= 1e-3);
    }
}

TEST_CASE("minimizer does not depend on which late window is used", "[optimize][property]") {
    const auto p = test::fig3_params();
    const double a = find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {0.5, 3.0}, 1e-3, late_window(p, 20, 24)).p_star;
    const double b = find_optimal_exponent(p, EnergyInit{2.0}, 0.4, {0.5, 3.0}, 1e-3, late_window(p, 24, 28)).p_star;
    CHECK(std::abs(a - b) <= 1e-3);
}
