#include "fluxres/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluxres/dormand_prince.hpp"

namespace fluxres {

void check_integrator_config(const IntegratorConfig &config) {
    if (!(config.rel_tol > 0) || !(config.abs_tol > 0))
        throw InvalidArgument("integrator tolerances must be positive");
    if (!(config.sample_dt > 0) || !std::isfinite(config.sample_dt))
        throw InvalidArgument("sample_dt must be positive");
    if (config.max_step && !(*config.max_step > 0))
        throw InvalidArgument("max_step must be positive");
}

double default_max_step(const ResonatorParams &params, const DriveSpec &drive) {
    double fastest = std::max(params.omega_r, params.omega_p);
    if (const auto *s = std::get_if<SinusoidDrive>(&drive)) fastest = std::max(fastest, s->omega_d);
    return 2 * std::numbers::pi / (32 * fastest);
}

Eigen::Vector2d rhs(const ResonatorParams &params, const DriveSpec &drive,
                    const OscillatorState &s) {
    const double w2 = omega_squared(params, s.t);
    if (!(w2 > 0)) throw NonPositiveFrequencySquared(s.t, w2);
    const double accel = -damping_rate(params) * s.phidot - w2 * s.phi +
                         params.alpha * pump_lambda(params, s.t) * s.phi * s.phi * s.phi +
                         eval_drive(drive, params, s.t);
    return {s.phidot, accel};
}

OscillatorState initial_state(const ResonatorParams &params, const InitialConditions &init,
                              double t0) {
    if (const auto *e = std::get_if<EnergyInit>(&init)) {
        if (!(e->e0 >= 0)) throw InvalidArgument("initial energy e0 must be >= 0");
        return {t0, 0.0, std::sqrt(2 * e->e0 / params.capacitance)};
    }
    const auto &s = std::get<StateInit>(init);
    if (!std::isfinite(s.phi0) || !std::isfinite(s.phidot0))
        throw InvalidArgument("initial state must be finite");
    return {t0, s.phi0, s.phidot0};
}

double charge(const ResonatorParams &params, const OscillatorState &s) {
    return params.capacitance * std::exp(damping_rate(params) * s.t) * s.phidot;
}

double energy_a1(const ResonatorParams &params, const DriveSpec &drive, const OscillatorState &s) {
    const double w2 = omega_squared(params, s.t);
    if (!(w2 > 0)) throw NonPositiveFrequencySquared(s.t, w2);
    const double q = charge(params, s);
    const double c = params.capacitance;
    const double xi = eval_drive(drive, params, s.t);
    return std::exp(-2 * damping_rate(params) * s.t) * q * q / (2 * c) +
           0.5 * c * (w2 * s.phi * s.phi - 2 * xi * s.phi);
}

EnergyInit as_energy_init(const ResonatorParams &params, const DriveSpec &drive,
                          const InitialConditions &init, double t0) {
    if (const auto *e = std::get_if<EnergyInit>(&init)) return *e;
    return {energy_a1(params, drive, initial_state(params, init, t0))};
}

namespace {

StepControl step_control(const ResonatorParams &params, const DriveSpec &drive,
                         const IntegratorConfig &config) {
    check_integrator_config(config);
    return {config.rel_tol, config.abs_tol, config.max_step.value_or(default_max_step(params, drive))};
}

auto make_rhs(const ResonatorParams &params, const DriveSpec &drive) {
    return [&params, &drive](double t, const Eigen::Vector2d &y) {
        return rhs(params, drive, OscillatorState{t, y[0], y[1]});
    };
}

}  // namespace

OscillatorState propagate(const ResonatorParams &params, const DriveSpec &drive,
                          const OscillatorState &start, double t_end,
                          const IntegratorConfig &config) {
    DormandPrince<2> stepper(step_control(params, drive, config));
    double t = start.t;
    Eigen::Vector2d y(start.phi, start.phidot);
    stepper.advance(make_rhs(params, drive), t, y, t_end);
    return {t, y[0], y[1]};
}

Trajectory integrate(const ResonatorParams &params, const DriveSpec &drive,
                     const InitialConditions &init, const IntegratorConfig &config,
                     TimeInterval horizon) {
    validate_params(params, drive, horizon);
    DormandPrince<2> stepper(step_control(params, drive, config));

    const Eigen::VectorXd grid = uniform_grid(horizon, config.sample_dt);
    const Eigen::Index n = grid.size();
    Trajectory::Samples samples(n, static_cast<Eigen::Index>(Trajectory::kColumns));

    const OscillatorState s0 = initial_state(params, init, horizon.start);
    double t = s0.t;
    Eigen::Vector2d y(s0.phi, s0.phidot);
    auto f = make_rhs(params, drive);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double tk = grid[k];
        stepper.advance(f, t, y, tk);
        const OscillatorState s{tk, y[0], y[1]};
        samples.row(k) << tk, y[0], y[1], charge(params, s), energy_a1(params, drive, s);
    }
    return Trajectory(std::move(samples), params, drive);
}

// ---------------------------------------------------------------------------

std::vector<double> upward_zero_crossings(const Trajectory &trajectory) {
    std::vector<double> out;
    const auto t = trajectory.time();
    const auto phi = trajectory.phi();
    for (Eigen::Index i = 0; i + 1 < trajectory.size(); ++i) {
        if (phi[i] < 0 && phi[i + 1] >= 0) {
            const double u = -phi[i] / (phi[i + 1] - phi[i]);
            out.push_back(t[i] + u * (t[i + 1] - t[i]));
        }
    }
    return out;
}

std::vector<Cycle> detect_cycles(const Trajectory &trajectory) {
    const auto crossings = upward_zero_crossings(trajectory);
    std::vector<Cycle> cycles;
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
        cycles.push_back({crossings[i], crossings[i + 1]});
    return cycles;
}

Cycle cycle_at(const Trajectory &trajectory, std::size_t index) {
    const auto cycles = detect_cycles(trajectory);
    if (index >= cycles.size())
        throw InsufficientCycles("trajectory has " + std::to_string(cycles.size()) +
                                 " complete cycles; cycle " + std::to_string(index) +
                                 " requested");
    return cycles[index];
}

namespace {

/// Linear interpolation of `values` at time x inside row segment [i, i+1].
double lerp_at(const Trajectory &tr, const Eigen::Ref<const Eigen::VectorXd> &values,
               Eigen::Index i, double x) {
    const auto t = tr.time();
    const double u = (x - t[i]) / (t[i + 1] - t[i]);
    return values[i] + u * (values[i + 1] - values[i]);
}

/// Row index i with t[i] <= x < t[i+1], clamped to a valid segment.
Eigen::Index segment_of(const Trajectory &tr, double x) {
    const auto t = tr.time();
    const double *first = t.data();
    const auto n = tr.size();
    auto idx = std::upper_bound(first, first + n, x) - first - 1;
    return std::clamp<Eigen::Index>(idx, 0, n - 2);
}

}  // namespace

double integrate_samples(const Trajectory &trajectory,
                         const Eigen::Ref<const Eigen::VectorXd> &values, double a, double b) {
    if (trajectory.size() < 2) throw InvalidArgument("trajectory needs at least 2 samples");
    if (values.size() != trajectory.size())
        throw InvalidArgument("values are not aligned with the trajectory");
    const auto t = trajectory.time();
    if (b < a) return -integrate_samples(trajectory, values, b, a);
    if (a < t[0] || b > t[trajectory.size() - 1])
        throw InvalidArgument("integration bounds outside the trajectory");

    const Eigen::Index ia = segment_of(trajectory, a);
    const Eigen::Index ib = segment_of(trajectory, b);
    const double fa = lerp_at(trajectory, values, ia, a);
    const double fb = lerp_at(trajectory, values, ib, b);
    if (ia == ib) return 0.5 * (fa + fb) * (b - a);

    double sum = 0.5 * (fa + values[ia + 1]) * (t[ia + 1] - a);
    for (Eigen::Index i = ia + 1; i < ib; ++i) sum += 0.5 * (values[i] + values[i + 1]) * (t[i + 1] - t[i]);
    sum += 0.5 * (values[ib] + fb) * (b - t[ib]);
    return sum;
}

double cycle_average(const Trajectory &trajectory, const Eigen::Ref<const Eigen::VectorXd> &values,
                     const Cycle &cycle) {
    const double g = damping_rate(trajectory.params());
    const double tc = cycle.midpoint();
    const Eigen::VectorXd weighted =
        ((g * (trajectory.time().array() - tc)).exp() * values.array()).matrix();
    return integrate_samples(trajectory, weighted, cycle.start, cycle.end) / cycle.period();
}

double cycle_energy(const Trajectory &trajectory, const Cycle &cycle) {
    return cycle_average(trajectory, trajectory.energy(), cycle);
}

double compute_action(const Trajectory &trajectory, std::size_t cycle_index) {
    const Cycle cycle = cycle_at(trajectory, cycle_index);
    const Eigen::VectorXd integrand =
        trajectory.charge().cwiseProduct(trajectory.phidot());
    return integrate_samples(trajectory, integrand, cycle.start, cycle.end);
}

double action_energy_identity_check(const Trajectory &trajectory, std::size_t cycle_index) {
    const auto &p = trajectory.params();
    if (p.alpha != 0) throw InvalidArgument("action/energy identity holds only for alpha = 0");
    const Cycle cycle = cycle_at(trajectory, cycle_index);
    const double j = compute_action(trajectory, cycle_index);
    const double tc = cycle.midpoint();
    const double w = eval_omega(p, tc);
    const double xi = eval_drive(trajectory.drive(), p, tc);
    const double e_cyc = cycle_energy(trajectory, cycle);
    const double predicted = 2 * std::numbers::pi * std::exp(damping_rate(p) * tc) / w *
                             (e_cyc + p.capacitance * xi * xi / (2 * w * w));
    return std::abs(j - predicted) / std::abs(predicted);
}

}  // namespace fluxres
