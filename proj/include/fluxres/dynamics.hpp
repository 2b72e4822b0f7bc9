#pragma once

// Direct numerical integration of the extended Duffing equation
//
//   phi'' + (omega_r/Q) phi' + omega^2(t) phi - alpha Lambda(t) phi^3 = xi(t)
//
// plus the trajectory energy, the charge q = C e^{omega_r t/Q} phi', and the
// classical action J = \oint q dphi over detected oscillation cycles.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fluxres/model.hpp"

namespace fluxres {

struct OscillatorState {
    double t{0};
    double phi{0};
    double phidot{0};
};

struct IntegratorConfig {
    double rel_tol{1e-9};
    double abs_tol{1e-9};
    /// Unset means 2 pi / (32 max(omega_r, omega_p, omega_d)).
    std::optional<double> max_step;
    double sample_dt{0.01};
};

/// Throws InvalidArgument unless tolerances and sample_dt are positive.
void check_integrator_config(const IntegratorConfig &config);

double default_max_step(const ResonatorParams &params, const DriveSpec &drive);

/// Sampled trajectory. Rows are samples; columns are (t, phi, phidot, q, E).
class Trajectory {
public:
    enum Column : Eigen::Index { kTime = 0, kPhi, kPhiDot, kCharge, kEnergy, kColumns };
    using Samples = Eigen::Matrix<double, Eigen::Dynamic, kColumns>;

    Trajectory(Samples samples, ResonatorParams params, DriveSpec drive)
        : samples_(std::move(samples)), params_(params), drive_(std::move(drive)) {}

    Eigen::Index size() const { return samples_.rows(); }
    const Samples &samples() const { return samples_; }
    const ResonatorParams &params() const { return params_; }
    const DriveSpec &drive() const { return drive_; }

    auto time() const { return samples_.col(kTime); }
    auto phi() const { return samples_.col(kPhi); }
    auto phidot() const { return samples_.col(kPhiDot); }
    auto charge() const { return samples_.col(kCharge); }
    auto energy() const { return samples_.col(kEnergy); }

    OscillatorState state(Eigen::Index i) const {
        return {samples_(i, kTime), samples_(i, kPhi), samples_(i, kPhiDot)};
    }

private:
    Samples samples_;
    ResonatorParams params_;
    DriveSpec drive_;
};

/// (dphi/dt, dphidot/dt).
Eigen::Vector2d rhs(const ResonatorParams &params, const DriveSpec &drive,
                    const OscillatorState &state);

/// Energy initial conditions start all-kinetic: phi = 0, phidot = sqrt(2 E(0) / C).
OscillatorState initial_state(const ResonatorParams &params, const InitialConditions &init,
                              double t0 = 0.0);

/// q = C e^{omega_r t / Q} phidot.
double charge(const ResonatorParams &params, const OscillatorState &state);

/// E = e^{-2 omega_r t/Q} q^2 / (2C) + (C/2) (omega^2(t) phi^2 - 2 xi(t) phi).
double energy_a1(const ResonatorParams &params, const DriveSpec &drive,
                 const OscillatorState &state);

/// The energy form of `init`: state initial conditions become E(0) from the
/// A1 energy at t0. The closed-form expressions need only E(0).
EnergyInit as_energy_init(const ResonatorParams &params, const DriveSpec &drive,
                          const InitialConditions &init, double t0 = 0.0);

/// Integrates from `start` to `t_end` (either direction) and returns the end state.
OscillatorState propagate(const ResonatorParams &params, const DriveSpec &drive,
                          const OscillatorState &start, double t_end,
                          const IntegratorConfig &config);

/// Integrates over the horizon; `init` is the state at horizon.start. Samples
/// are taken on the uniform grid horizon.start + k * sample_dt <= horizon.end.
Trajectory integrate(const ResonatorParams &params, const DriveSpec &drive,
                     const InitialConditions &init, const IntegratorConfig &config,
                     TimeInterval horizon);

// ---------------------------------------------------------------------------
// Cycles and action
// ---------------------------------------------------------------------------

/// One oscillation, between consecutive upward zero crossings of phi.
struct Cycle {
    double start{0};
    double end{0};

    double midpoint() const { return 0.5 * (start + end); }
    double period() const { return end - start; }
};

/// Interpolated times where phi goes from negative to non-negative.
std::vector<double> upward_zero_crossings(const Trajectory &trajectory);

std::vector<Cycle> detect_cycles(const Trajectory &trajectory);

/// Throws InsufficientCycles when the trajectory has fewer than index + 1 cycles.
Cycle cycle_at(const Trajectory &trajectory, std::size_t index);

/// Trapezoidal integral of `values` (aligned with the trajectory rows) over
/// [a, b], with linear interpolation at the end points.
double integrate_samples(const Trajectory &trajectory, const Eigen::Ref<const Eigen::VectorXd> &values,
                         double a, double b);

/// Cycle average of `values` with the damping trend divided out:
/// e^{-g t_c} <e^{g t} values>_cycle, g = omega_r / Q. Reduces to the plain
/// time average when damping is off.
double cycle_average(const Trajectory &trajectory, const Eigen::Ref<const Eigen::VectorXd> &values,
                     const Cycle &cycle);

/// Cycle-averaged A1 energy.
double cycle_energy(const Trajectory &trajectory, const Cycle &cycle);

/// J = \oint q dphi = \int q phidot dt over the cycle.
double compute_action(const Trajectory &trajectory, std::size_t cycle_index);

/// Relative residual |J - J_pred| / |J_pred| with
/// J_pred = 2 pi e^{omega_r t_c/Q} / omega(t_c) (E_cyc + C xi(t_c)^2 / (2 omega(t_c)^2)).
/// Requires alpha == 0.
double action_energy_identity_check(const Trajectory &trajectory, std::size_t cycle_index);

}  // namespace fluxres
