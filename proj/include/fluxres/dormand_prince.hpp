#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with FSAL and a standard
// PI-free step controller. Header-only; templated on the state dimension.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "fluxres/errors.hpp"

namespace fluxres {

struct StepControl {
    double rel_tol{1e-9};
    double abs_tol{1e-9};
    double max_step{std::numeric_limits<double>::infinity()};
};

template <int N>
class DormandPrince {
public:
    using Vector = Eigen::Matrix<double, N, 1>;

    explicit DormandPrince(StepControl control) : control_(control) {}

    /// Advances (t, y) to exactly t_end with adaptive steps. `rhs(t, y)`
    /// returns dy/dt. Works in either time direction. The last accepted step
    /// size is carried across calls so a sequence of short hops (one per
    /// output sample) does not restart the controller each time.
    template <class Rhs>
    void advance(Rhs &&rhs, double &t, Vector &y, double t_end) {
        if (t == t_end) return;
        const double dir = t_end > t ? 1.0 : -1.0;
        if (!have_k1_ || k1_t_ != t) {
            k1_ = rhs(t, y);
            k1_t_ = t;
            have_k1_ = true;
        }
        if (h_ <= 0) h_ = initial_step(y);

        while (dir * (t_end - t) > 0) {
            const double remaining = std::abs(t_end - t);
            const bool last = h_ >= remaining;
            const double h = last ? remaining : h_;
            const double min_step = 64 * std::numeric_limits<double>::epsilon() *
                                    std::max(std::abs(t), 1.0);
            if (h < min_step && !last) throw NumericalFailure("integrator step size underflow");

            const double hs = dir * h;
            Vector y_new, err;
            Vector k7 = stage(rhs, t, y, hs, y_new, err);

            const double e = error_norm(err, y, y_new);
            if (!std::isfinite(e) || !y_new.allFinite()) {
                if (h < min_step) throw NumericalFailure("non-finite integrator state");
                h_ = 0.25 * h;
                continue;
            }
            if (e <= 1.0) {
                t = last ? t_end : t + hs;
                y = y_new;
                k1_ = k7;
                k1_t_ = t;
                const double grow = e == 0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
                // A step shortened to land on t_end says nothing about the
                // controller's preferred size; keep the larger one.
                h_ = std::min(std::max(h_, h) * (last ? 1.0 : grow), control_.max_step);
                if (last && grow < 1.0) h_ = std::min(h_, h * grow);
            } else {
                h_ = h * std::clamp(0.9 * std::pow(e, -0.2), 0.2, 1.0);
            }
        }
    }

private:
    double initial_step(const Vector &y) const {
        const double scale = control_.abs_tol + control_.rel_tol * y.cwiseAbs().maxCoeff();
        const double ydot = std::max(k1_.cwiseAbs().maxCoeff(), 1e-12);
        const double h = 0.01 * std::pow(scale / ydot, 0.2) + 0.01 * scale / ydot;
        return std::min({std::max(h, 1e-6), control_.max_step, 1e-2});
    }

    double error_norm(const Vector &err, const Vector &y, const Vector &y_new) const {
        const Vector scale = (control_.abs_tol +
                              control_.rel_tol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array())
                                 .matrix();
        return std::sqrt((err.array() / scale.array()).square().mean());
    }

    template <class Rhs>
    Vector stage(Rhs &rhs, double t, const Vector &y, double h, Vector &y_new, Vector &err) const {
        // Butcher tableau (Dormand & Prince 1980).
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const Vector &k1 = k1_;
        const Vector k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
        const Vector k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
        const Vector k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        const Vector k5 =
            rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        const Vector k6 =
            rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = rhs(t + h, y_new);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        return k7;
    }

    StepControl control_;
    double h_{0};
    Vector k1_{Vector::Zero()};
    double k1_t_{0};
    bool have_k1_{false};
};

}  // namespace fluxres
