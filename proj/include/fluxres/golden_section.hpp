#pragma once

#include <cmath>
#include <utility>

namespace fluxres {

struct GoldenSectionResult {
    double x{0};
    double fx{0};
    double lo{0};
    double hi{0};
    int evaluations{0};
};

/// Golden-section search for a minimum of a unimodal `f` on [lo, hi]; stops
/// once the bracket is no wider than `tol`. `on_eval(x, fx)` sees every
/// evaluation. The returned x is the best point evaluated and always lies in
/// the final [lo, hi].
template <class F, class OnEval>
GoldenSectionResult golden_section_minimize(F &&f, double lo, double hi, double tol, OnEval &&on_eval) {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    int evals = 0;
    auto eval = [&](double x) {
        const double fx = f(x);
        ++evals;
        on_eval(x, fx);
        return fx;
    };

    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    const double mid = 0.5 * (a + b);
    const double fm = eval(mid);

    GoldenSectionResult r{mid, fm, a, b, evals};
    for (const auto &[x, fx] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (fx < r.fx && x >= a && x <= b) {
            r.x = x;
            r.fx = fx;
        }
    }
    return r;
}

template <class F>
GoldenSectionResult golden_section_minimize(F &&f, double lo, double hi, double tol) {
    return golden_section_minimize(std::forward<F>(f), lo, hi, tol, [](double, double) {});
}

}  // namespace fluxres
