#pragma once

// Recovers the optimal adiabatic drive exponent: with xi(t) = xi0 omega(t)^p
// the late-time invariant is flat only for p = 3/2.

#include <utility>
#include <vector>

#include "fluxres/model.hpp"

namespace fluxres {

struct SearchInterval {
    double lo{0.5};
    double hi{3.0};
};

struct OptimizationResult {
    double p_star{0};
    double objective_at_p_star{0};
    int evaluations{0};
    SearchInterval bracket;
    /// Every (p, objective) evaluated, prescan first, in evaluation order.
    std::vector<std::pair<double, double>> trace;
};

struct ObjectiveOptions {
    double sample_dt{0.01};
};

/// Peak-to-peak of the closed-form invariant over `window` with drive
/// xi0 omega^p. Always >= 0.
double drift_objective(const ResonatorParams &params, const InitialConditions &init, double xi0,
                       double p, TimeInterval window, ObjectiveOptions options = {});

/// 16-point prescan of [search.lo, search.hi], then golden-section search on
/// the bracket around the best grid point until it is no wider than `tol`.
/// Throws FlatObjective if the prescan shows no variation (max - min < 1e-15).
OptimizationResult find_optimal_exponent(const ResonatorParams &params,
                                         const InitialConditions &init, double xi0,
                                         SearchInterval search, double tol, TimeInterval window,
                                         ObjectiveOptions options = {});

}  // namespace fluxres
