#pragma once

// Closed-form description of the damped, parametrically pumped flux-qubit
// resonator: the pumped frequency omega(t), the Duffing modulation Lambda(t),
// the external drive xi(t), and the closed-form energy and invariant E/omega.

#include <cmath>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fluxres/errors.hpp"

namespace fluxres {

/// Circuit and pump constants, in dimensionless simulation units.
///
/// `damped = false` removes the (omega_r / Q) friction term everywhere it
/// appears (equation of motion, decay factors) while leaving Q in the pump
/// shift and in Lambda(t). It stands in for the Q -> infinity limit without
/// making those pump terms blow up.
template <typename Scalar>
struct BasicResonatorParams {
    Scalar omega_r{1};
    Scalar q_factor{1};
    Scalar epsilon{0};
    Scalar omega_p{1};
    Scalar beta{0};
    Scalar alpha{0};
    Scalar lambda_corr{0};
    Scalar capacitance{1};
    bool damped{true};

    template <typename Other>
    BasicResonatorParams<Other> cast() const {
        return {Other(omega_r),  Other(q_factor), Other(epsilon),
                Other(omega_p),  Other(beta),     Other(alpha),
                Other(lambda_corr), Other(capacitance), damped};
    }
};

using ResonatorParams = BasicResonatorParams<double>;

/// Closed time interval [start, end].
struct TimeInterval {
    double start{0};
    double end{0};

    double length() const { return end - start; }
    bool contains(double t) const { return t >= start && t <= end; }
};

/// Uniform grid start + k * dt for every k with the point not past `end`.
Eigen::VectorXd uniform_grid(TimeInterval interval, double dt);

// ---------------------------------------------------------------------------
// Scalar-generic expressions. No validation; callers that need a guaranteed
// positive omega^2 go through eval_omega().
// ---------------------------------------------------------------------------

/// Amplitude of the pump-induced frequency shift, beta eps^2 Q / (2 omega_r omega_p).
template <typename Scalar>
Scalar pump_shift(const BasicResonatorParams<Scalar> &p) {
    return p.beta * p.epsilon * p.epsilon * p.q_factor /
           (Scalar(2) * p.omega_r * p.omega_p);
}

/// Bracket of the pumped frequency:
/// omega_r^2 + eps cos(omega_p t) - shift (1 - cos(2 omega_p t)).
template <typename Scalar>
Scalar omega_squared(const BasicResonatorParams<Scalar> &p, Scalar t) {
    using std::cos;
    return p.omega_r * p.omega_r + p.epsilon * cos(p.omega_p * t) -
           pump_shift(p) * (Scalar(1) - cos(Scalar(2) * p.omega_p * t));
}

/// Lambda(t) = 1 - 3 lambda Q eps cos(omega_p t) / (2 omega_r omega_p).
template <typename Scalar>
Scalar pump_lambda(const BasicResonatorParams<Scalar> &p, Scalar t) {
    using std::cos;
    return Scalar(1) - Scalar(3) * p.lambda_corr * p.q_factor * p.epsilon *
                           cos(p.omega_p * t) / (Scalar(2) * p.omega_r * p.omega_p);
}

/// Energy decay rate omega_r / Q, or zero when damping is switched off.
template <typename Scalar>
Scalar damping_rate(const BasicResonatorParams<Scalar> &p) {
    return p.damped ? p.omega_r / p.q_factor : Scalar(0);
}

/// exp(-omega_r t / Q).
template <typename Scalar>
Scalar decay_factor(const BasicResonatorParams<Scalar> &p, Scalar t) {
    using std::exp;
    return exp(-damping_rate(p) * t);
}

/// Sufficient positivity bound omega_r^2 - |eps| - 2 shift; only a valid
/// lower bound on omega^2 when beta >= 0.
template <typename Scalar>
Scalar omega_squared_lower_bound(const BasicResonatorParams<Scalar> &p) {
    using std::abs;
    return p.omega_r * p.omega_r - abs(p.epsilon) - Scalar(2) * pump_shift(p);
}

// ---------------------------------------------------------------------------
// Drives and initial conditions
// ---------------------------------------------------------------------------

struct ZeroDrive {};

/// xi0 cos(omega_d t + theta).
struct SinusoidDrive {
    double xi0{0};
    double omega_d{0};
    double theta{0};
};

/// xi0 omega(t)^exponent. The optimal adiabatic drive has exponent 3/2.
struct PowerOfOmegaDrive {
    double xi0{0};
    double exponent{1.5};
};

/// Piecewise-linear drive through (times[i], values[i]), clamped outside.
struct TabulatedDrive {
    Eigen::VectorXd times;
    Eigen::VectorXd values;
};

using DriveSpec = std::variant<ZeroDrive, SinusoidDrive, PowerOfOmegaDrive, TabulatedDrive>;

struct EnergyInit {
    double e0{1};
};

struct StateInit {
    double phi0{0};
    double phidot0{0};
};

using InitialConditions = std::variant<EnergyInit, StateInit>;

// ---------------------------------------------------------------------------
// Checked evaluation
// ---------------------------------------------------------------------------

/// Throws InvalidArgument unless omega_r, Q, C, omega_p are positive and finite.
void check_param_ranges(const ResonatorParams &params);

/// Throws InvalidArgument on a malformed drive (negative omega_d, bad table).
void check_drive(const DriveSpec &drive);

/// omega(t); throws NonPositiveFrequencySquared when the bracket is <= 0.
double eval_omega(const ResonatorParams &params, double t);

double eval_lambda(const ResonatorParams &params, double t);

/// xi(t) for any drive variant.
double eval_drive(const DriveSpec &drive, const ResonatorParams &params, double t);

/// Closed-form energy for the linear (alpha ~ 0) resonator:
///
///   E(t) = e^{-omega_r t/Q} (omega(t)/omega(0)) (E(0) + C xi(0)^2 / (2 omega(0)^2))
///          - C xi(t)^2 / (2 omega(t)^2)
///
/// Requires an EnergyInit; throws InvalidArgument otherwise.
double closed_form_energy(const ResonatorParams &params, const DriveSpec &drive,
                          const InitialConditions &init, double t);

/// Closed-form invariant I(t) = E(t) / omega(t), evaluated from its own
/// expanded form rather than by dividing.
double closed_form_invariant(const ResonatorParams &params, const DriveSpec &drive,
                             const InitialConditions &init, double t);

struct ValidationReport {
    bool valid{false};
    TimeInterval horizon;
    /// omega_r^2 - |eps| - beta eps^2 Q / (omega_r omega_p).
    double omega_sq_lower_bound{0};
    /// True when beta >= 0 and the bound alone proves positivity.
    bool certified_by_bound{false};
    /// Smallest omega^2 found by sampling (and local refinement) on the horizon.
    double min_omega_sq{0};
    double t_at_min{0};
    long samples{0};
};

/// Never throws for a positivity failure; reports it instead. Still throws
/// InvalidArgument for out-of-range fields.
ValidationReport check_params(const ResonatorParams &params, const DriveSpec &drive,
                              TimeInterval horizon);

/// As check_params, but throws NonPositiveFrequencySquared when invalid.
ValidationReport validate_params(const ResonatorParams &params, const DriveSpec &drive,
                                 TimeInterval horizon);

/// Human-readable description of a failed report; names the violated bound.
std::string describe_failure(const ValidationReport &report);

}  // namespace fluxres
