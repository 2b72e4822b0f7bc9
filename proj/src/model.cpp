#include "fluxres/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fluxres {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr int kSamplesPerPumpPeriod = 256;

}  // namespace

NonPositiveFrequencySquared::NonPositiveFrequencySquared(double t, double omega_sq)
    : NonPositiveFrequencySquared(
          t, omega_sq,
          "omega^2(t) must be positive: omega^2 = " + fmt_num(omega_sq) + " at t = " + fmt_num(t)) {}

Eigen::VectorXd uniform_grid(TimeInterval interval, double dt) {
    if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("sample spacing must be positive");
    if (!(interval.end >= interval.start)) throw InvalidArgument("interval end precedes start");
    const auto n =
        static_cast<Eigen::Index>(std::floor(interval.length() / dt * (1 + 1e-12))) + 1;
    Eigen::VectorXd grid(n);
    for (Eigen::Index k = 0; k < n; ++k) grid[k] = interval.start + static_cast<double>(k) * dt;
    return grid;
}

void check_param_ranges(const ResonatorParams &p) {
    if (!positive_finite(p.omega_r)) throw InvalidArgument("omega_r must be positive");
    if (!positive_finite(p.q_factor)) throw InvalidArgument("q_factor must be positive");
    if (!positive_finite(p.omega_p)) throw InvalidArgument("omega_p must be positive");
    if (!positive_finite(p.capacitance)) throw InvalidArgument("capacitance must be positive");
    for (double v : {p.epsilon, p.beta, p.alpha, p.lambda_corr}) {
        if (!std::isfinite(v)) throw InvalidArgument("resonator parameters must be finite");
    }
}

void check_drive(const DriveSpec &drive) {
    std::visit(overloaded{
                   [](const ZeroDrive &) {},
                   [](const SinusoidDrive &d) {
                       if (!std::isfinite(d.xi0) || !std::isfinite(d.theta))
                           throw InvalidArgument("sinusoid drive fields must be finite");
                       if (!(d.omega_d >= 0) || !std::isfinite(d.omega_d))
                           throw InvalidArgument("sinusoid drive requires omega_d >= 0");
                   },
                   [](const PowerOfOmegaDrive &d) {
                       if (!std::isfinite(d.xi0) || !std::isfinite(d.exponent))
                           throw InvalidArgument("power_of_omega drive fields must be finite");
                   },
                   [](const TabulatedDrive &d) {
                       if (d.times.size() != d.values.size())
                           throw InvalidArgument("tabulated drive: times and values differ in length");
                       if (d.times.size() < 2)
                           throw InvalidArgument("tabulated drive needs at least 2 samples");
                       if (!d.times.allFinite() || !d.values.allFinite())
                           throw InvalidArgument("tabulated drive samples must be finite");
                       for (Eigen::Index i = 1; i < d.times.size(); ++i) {
                           if (!(d.times[i] > d.times[i - 1]))
                               throw InvalidArgument("tabulated drive times must be strictly increasing");
                       }
                   },
               },
               drive);
}

double eval_omega(const ResonatorParams &params, double t) {
    const double w2 = omega_squared(params, t);
    if (!(w2 > 0)) throw NonPositiveFrequencySquared(t, w2);
    return std::sqrt(w2);
}

double eval_lambda(const ResonatorParams &params, double t) { return pump_lambda(params, t); }

double eval_drive(const DriveSpec &drive, const ResonatorParams &params, double t) {
    return std::visit(
        overloaded{
            [](const ZeroDrive &) { return 0.0; },
            [t](const SinusoidDrive &d) { return d.xi0 * std::cos(d.omega_d * t + d.theta); },
            [&params, t](const PowerOfOmegaDrive &d) {
                return d.xi0 * std::pow(eval_omega(params, t), d.exponent);
            },
            [t](const TabulatedDrive &d) {
                const auto n = d.times.size();
                if (t <= d.times[0]) return d.values[0];
                if (t >= d.times[n - 1]) return d.values[n - 1];
                const auto *first = d.times.data();
                const auto hi = std::upper_bound(first, first + n, t) - first;
                const auto lo = hi - 1;
                const double u = (t - d.times[lo]) / (d.times[hi] - d.times[lo]);
                return d.values[lo] + u * (d.values[hi] - d.values[lo]);
            },
        },
        drive);
}

namespace {

double initial_energy(const InitialConditions &init) {
    const auto *e = std::get_if<EnergyInit>(&init);
    if (e == nullptr)
        throw InvalidArgument("closed-form energy needs an energy initial condition (E(0))");
    return e->e0;
}

/// C xi^2 / (2 omega^2), the quasi-static drive energy.
double drive_energy(double c, double xi, double w) { return c * xi * xi / (2 * w * w); }

struct ClosedFormTerms {
    double e0;
    double omega0;
    double drive0;  // C xi(0)^2 / (2 omega(0)^2)
    double omega;
    double drive;   // C xi(t)^2 / (2 omega(t)^2)
    double decay;
};

ClosedFormTerms closed_form_terms(const ResonatorParams &p, const DriveSpec &drive,
                                  const InitialConditions &init, double t) {
    ClosedFormTerms k{};
    k.e0 = initial_energy(init);
    k.omega0 = eval_omega(p, 0.0);
    k.drive0 = drive_energy(p.capacitance, eval_drive(drive, p, 0.0), k.omega0);
    k.omega = eval_omega(p, t);
    k.drive = drive_energy(p.capacitance, eval_drive(drive, p, t), k.omega);
    k.decay = decay_factor(p, t);
    return k;
}

}  // namespace

// Both closed forms group the drive terms so that at t = 0 they cancel
// exactly, leaving E(0) and E(0) / omega(0) bit-for-bit.

double closed_form_energy(const ResonatorParams &p, const DriveSpec &drive,
                          const InitialConditions &init, double t) {
    const auto k = closed_form_terms(p, drive, init, t);
    const double growth = k.decay * (k.omega / k.omega0);
    return growth * k.e0 + (growth * k.drive0 - k.drive);
}

double closed_form_invariant(const ResonatorParams &p, const DriveSpec &drive,
                             const InitialConditions &init, double t) {
    const auto k = closed_form_terms(p, drive, init, t);
    return k.decay * k.e0 / k.omega0 + (k.decay * k.drive0 / k.omega0 - k.drive / k.omega);
}

ValidationReport check_params(const ResonatorParams &params, const DriveSpec &drive,
                              TimeInterval horizon) {
    check_param_ranges(params);
    check_drive(drive);
    if (!std::isfinite(horizon.start) || !std::isfinite(horizon.end) || horizon.end < horizon.start)
        throw InvalidArgument("horizon must be a finite interval with end >= start");

    ValidationReport report;
    report.horizon = horizon;
    report.omega_sq_lower_bound = omega_squared_lower_bound(params);
    report.certified_by_bound = params.beta >= 0 && report.omega_sq_lower_bound > 0;

    // omega^2 has period 2 pi / omega_p, so one period (or the whole horizon
    // if shorter) covers every value it takes.
    const double period = 2 * std::numbers::pi / params.omega_p;
    const double span = std::min(horizon.length(), period);
    const long intervals =
        std::max<long>(1, static_cast<long>(std::ceil(kSamplesPerPumpPeriod * span / period)));
    auto time_at = [&](long i) { return horizon.start + span * static_cast<double>(i) / intervals; };

    long best = 0;
    double best_val = omega_squared(params, horizon.start);
    for (long i = 1; i <= intervals; ++i) {
        const double v = omega_squared(params, time_at(i));
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    report.samples = intervals + 1;

    // Golden-section refinement between the neighbours of the best sample.
    double a = time_at(std::max<long>(0, best - 1));
    double b = time_at(std::min(intervals, best + 1));
    double t_best = time_at(best);
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = omega_squared(params, c);
    double fd = omega_squared(params, d);
    for (int it = 0; it < 80 && b - a > 1e-14 * (1 + std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = omega_squared(params, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = omega_squared(params, d);
        }
    }
    for (const auto &[tv, fv] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (fv < best_val) {
            best_val = fv;
            t_best = tv;
        }
    }
    report.min_omega_sq = best_val;
    report.t_at_min = t_best;
    report.valid = report.certified_by_bound || report.min_omega_sq > 0;
    return report;
}

std::string describe_failure(const ValidationReport &r) {
    std::ostringstream os;
    os << "omega^2 positivity bound violated: omega_r^2 - |epsilon| - "
          "beta*epsilon^2*Q/(omega_r*omega_p) = "
       << fmt_num(r.omega_sq_lower_bound);
    if (!r.certified_by_bound && r.omega_sq_lower_bound > 0) os << " (not a bound for beta < 0)";
    os << "; sampled minimum omega^2 = " << fmt_num(r.min_omega_sq) << " at t = "
       << fmt_num(r.t_at_min);
    return os.str();
}

ValidationReport validate_params(const ResonatorParams &params, const DriveSpec &drive,
                                 TimeInterval horizon) {
    auto report = check_params(params, drive, horizon);
    if (!report.valid)
        throw NonPositiveFrequencySquared(report.t_at_min, report.min_omega_sq,
                                          describe_failure(report));
    return report;
}

}  // namespace fluxres
