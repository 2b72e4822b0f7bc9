#include "fluxres/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace fluxres {

namespace {

std::string value_label(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

[[noreturn]] void axis_mismatch(const std::string &axis, const char *needs) {
    throw InvalidArgument("sweep axis '" + axis + "' requires " + needs);
}

}  // namespace

const std::vector<std::string> &sweep_axes() {
    static const std::vector<std::string> axes{
        "omega_r", "q_factor", "epsilon",  "omega_p", "beta",  "alpha",    "lambda",
        "capacitance", "xi0",  "omega_d",  "theta",   "exponent", "delta", "e0"};
    return axes;
}

Scenario apply_axis(const Scenario &base, const std::string &axis, double value) {
    if (!std::isfinite(value)) throw InvalidArgument("sweep values must be finite");
    Scenario s = base;
    auto &p = s.params;
    if (axis == "omega_r") p.omega_r = value;
    else if (axis == "q_factor") p.q_factor = value;
    else if (axis == "epsilon") p.epsilon = value;
    else if (axis == "omega_p") p.omega_p = value;
    else if (axis == "beta") p.beta = value;
    else if (axis == "alpha") p.alpha = value;
    else if (axis == "lambda") p.lambda_corr = value;
    else if (axis == "capacitance") p.capacitance = value;
    else if (axis == "xi0") {
        if (auto *d = std::get_if<SinusoidDrive>(&s.drive)) d->xi0 = value;
        else if (auto *d = std::get_if<PowerOfOmegaDrive>(&s.drive)) d->xi0 = value;
        else axis_mismatch(axis, "a sinusoid or power_of_omega drive");
    } else if (axis == "omega_d" || axis == "theta") {
        auto *d = std::get_if<SinusoidDrive>(&s.drive);
        if (d == nullptr) axis_mismatch(axis, "a sinusoid drive");
        (axis == "omega_d" ? d->omega_d : d->theta) = value;
    } else if (axis == "exponent" || axis == "delta") {
        auto *d = std::get_if<PowerOfOmegaDrive>(&s.drive);
        if (d == nullptr) axis_mismatch(axis, "a power_of_omega drive");
        d->exponent = axis == "delta" ? 1.5 + value : value;
    } else if (axis == "e0") {
        auto *e = std::get_if<EnergyInit>(&s.init);
        if (e == nullptr) axis_mismatch(axis, "an energy initial condition");
        e->e0 = value;
    } else {
        throw InvalidArgument("unknown sweep axis '" + axis + "'");
    }
    return s;
}

SweepPoint evaluate_scenario(const Scenario &scenario, bool numerical, double value) {
    SweepPoint point;
    point.value = value;
    point.resolved = scenario;
    const auto &p = scenario.params;
    validate_params(p, scenario.drive, scenario.horizon);
    const InitialConditions cf_init = as_energy_init(p, scenario.drive, scenario.init);
    const TimeInterval window = scenario.resolved_window();
    point.closed_form = invariant_series_closed_form(p, scenario.drive, cf_init, scenario.horizon,
                                                     scenario.integrator.sample_dt);
    point.metrics = drift_metrics(point.closed_form, window);
    if (numerical) {
        const auto trajectory =
            integrate(p, scenario.drive, scenario.init, scenario.integrator, scenario.horizon);
        point.numerical = invariant_series_numerical(trajectory);
        point.numerical_metrics = drift_metrics(*point.numerical, window);
    }
    return point;
}

SweepResult run_sweep(const SweepSpec &spec) {
    if (spec.values.empty()) throw InvalidArgument("sweep values list is empty");
    if (std::find(sweep_axes().begin(), sweep_axes().end(), spec.axis) == sweep_axes().end())
        throw InvalidArgument("unknown sweep axis '" + spec.axis + "'");
    std::vector<double> values = spec.values;
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end())
        throw InvalidArgument("sweep values must be distinct");

    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(values.size());
    for (double v : values) {
        jobs.push_back(std::async(std::launch::async, [&spec, v] {
            try {
                return evaluate_scenario(apply_axis(spec.base, spec.axis, v), spec.numerical, v);
            } catch (const NonPositiveFrequencySquared &e) {
                throw NonPositiveFrequencySquared(
                    e.time(), e.omega_sq(), spec.axis + " = " + value_label(v) + ": " + e.what());
            } catch (const NumericalFailure &e) {
                throw NumericalFailure(spec.axis + " = " + value_label(v) + ": " + e.what());
            } catch (const InvalidArgument &e) {
                throw InvalidArgument(spec.axis + " = " + value_label(v) + ": " + e.what());
            }
        }));
    }
    SweepResult result;
    result.axis = spec.axis;
    for (auto &job : jobs) result.points.push_back(job.get());
    return result;
}

ConvergenceRow energy_discrepancy(const Scenario &scenario) {
    const auto &p = scenario.params;
    if (p.alpha != 0) throw InvalidArgument("energy comparison requires alpha = 0");
    const auto trajectory =
        integrate(p, scenario.drive, scenario.init, scenario.integrator, scenario.horizon);
    const InitialConditions cf_init = as_energy_init(p, scenario.drive, scenario.init);
    const Eigen::VectorXd closed = trajectory.time().unaryExpr(
        [&](double t) { return closed_form_energy(p, scenario.drive, cf_init, t); });
    const auto cycles = detect_cycles(trajectory);
    if (cycles.empty()) throw InsufficientCycles("no complete cycle inside the horizon");

    ConvergenceRow row;
    row.cycles = cycles.size();
    for (const auto &cycle : cycles) {
        const double numeric = cycle_energy(trajectory, cycle);
        const double reference = cycle_average(trajectory, closed, cycle);
        row.max_rel_discrepancy =
            std::max(row.max_rel_discrepancy, std::abs(numeric - reference) / std::abs(reference));
    }
    return row;
}

std::vector<ConvergenceRow> run_convergence_study(const Scenario &base, int rungs) {
    if (rungs < 1) throw InvalidArgument("convergence study needs at least one rung");
    if (base.params.alpha != 0) throw InvalidArgument("convergence study requires alpha = 0");
    std::vector<ConvergenceRow> rows;
    for (int k = 0; k < rungs; ++k) {
        const double scale = std::ldexp(1.0, -k);
        Scenario s = base;
        s.params.epsilon *= scale;
        s.params.omega_p *= scale;
        if (auto *d = std::get_if<SinusoidDrive>(&s.drive)) d->omega_d *= scale;
        try {
            ConvergenceRow row = energy_discrepancy(s);
            row.rung = k;
            row.scale = scale;
            rows.push_back(row);
        } catch (const NumericalFailure &e) {
            throw NumericalFailure("convergence rung " + std::to_string(k) + ": " + e.what());
        } catch (const InsufficientCycles &e) {
            throw InsufficientCycles("convergence rung " + std::to_string(k) + ": " + e.what());
        }
    }
    return rows;
}

}  // namespace fluxres
