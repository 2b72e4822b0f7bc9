#pragma once

// Parameter sweeps over the invariant and the adiabatic convergence study
// that checks the closed-form energy against direct integration.

#include <optional>
#include <string>
#include <vector>

#include "fluxres/dynamics.hpp"
#include "fluxres/invariant.hpp"
#include "fluxres/model.hpp"

namespace fluxres {

/// A fully resolved run: everything needed to regenerate one series.
struct Scenario {
    ResonatorParams params;
    DriveSpec drive{ZeroDrive{}};
    InitialConditions init{EnergyInit{1.0}};
    IntegratorConfig integrator;
    TimeInterval horizon{0.0, 10.0};
    /// Unset means default_drift_window(params).
    std::optional<TimeInterval> window;

    TimeInterval resolved_window() const {
        return window.value_or(default_drift_window(params));
    }
};

/// Axis names accepted by apply_axis: omega_r, q_factor, epsilon, omega_p,
/// beta, alpha, lambda, capacitance, xi0, omega_d, theta, exponent, delta, e0.
const std::vector<std::string> &sweep_axes();

/// Copy of `base` with `axis` set to `value`. `delta` sets a power-of-omega
/// exponent to 3/2 + value. Throws InvalidArgument for an unknown axis or one
/// the base drive/init does not have.
Scenario apply_axis(const Scenario &base, const std::string &axis, double value);

struct SweepSpec {
    Scenario base;
    std::string axis;
    std::vector<double> values;
    /// Also integrate and build the cycle-averaged numerical series.
    bool numerical{false};
};

struct SweepPoint {
    double value{0};
    Scenario resolved;
    InvariantSeries closed_form;
    DriftMetrics metrics;
    std::optional<InvariantSeries> numerical;
    std::optional<DriftMetrics> numerical_metrics;
};

struct SweepResult {
    std::string axis;
    /// Sorted by value.
    std::vector<SweepPoint> points;
};

/// Evaluates one resolved scenario. Used by run_sweep and for replaying a
/// point from its provenance.
SweepPoint evaluate_scenario(const Scenario &scenario, bool numerical, double value = 0.0);

/// Points are evaluated concurrently; the result does not depend on the order
/// of `values`. Errors name the offending sweep value.
SweepResult run_sweep(const SweepSpec &spec);

struct ConvergenceRow {
    int rung{0};
    double scale{1};
    /// max over cycles of |<E_num> - <E_closed>| / |<E_closed>|, both cycle averaged.
    double max_rel_discrepancy{0};
    std::size_t cycles{0};
};

/// Scales (epsilon, omega_p, omega_d) by 2^-k for k = 0 .. rungs-1 and
/// compares integrated and closed-form energies. Requires alpha = 0.
std::vector<ConvergenceRow> run_convergence_study(const Scenario &base, int rungs);

/// Max relative discrepancy for a single scenario (one convergence rung).
ConvergenceRow energy_discrepancy(const Scenario &scenario);

}  // namespace fluxres
