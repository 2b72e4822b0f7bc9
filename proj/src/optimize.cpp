#include "fluxres/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fluxres/golden_section.hpp"
#include "fluxres/invariant.hpp"

namespace fluxres {

namespace {

constexpr int kPrescanPoints = 16;
constexpr double kFlatThreshold = 1e-15;

double peak_to_peak_unchecked(const ResonatorParams &params, const InitialConditions &init,
                              const DriveSpec &drive, const Eigen::VectorXd &grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double t : grid) {
        const double v = closed_form_invariant(params, drive, init, t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

}  // namespace

double drift_objective(const ResonatorParams &params, const InitialConditions &init, double xi0,
                       double p, TimeInterval window, ObjectiveOptions options) {
    const DriveSpec drive = PowerOfOmegaDrive{xi0, p};
    validate_params(params, drive, {0.0, window.end});
    const auto grid = uniform_grid(window, options.sample_dt);
    if (grid.size() < 2) throw EmptyWindow("objective window holds fewer than 2 samples");
    return peak_to_peak_unchecked(params, init, drive, grid);
}

OptimizationResult find_optimal_exponent(const ResonatorParams &params,
                                         const InitialConditions &init, double xi0,
                                         SearchInterval search, double tol, TimeInterval window,
                                         ObjectiveOptions options) {
    if (!(search.hi > search.lo) || !std::isfinite(search.lo) || !std::isfinite(search.hi))
        throw InvalidArgument("search interval must satisfy lo < hi");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    validate_params(params, ZeroDrive{}, {0.0, window.end});
    const auto grid = uniform_grid(window, options.sample_dt);
    if (grid.size() < 2) throw EmptyWindow("objective window holds fewer than 2 samples");

    OptimizationResult result;
    auto objective = [&](double p) {
        return peak_to_peak_unchecked(params, init, PowerOfOmegaDrive{xi0, p}, grid);
    };
    auto record = [&](double p, double f) { result.trace.emplace_back(p, f); };

    std::vector<double> prescan(kPrescanPoints);
    for (int i = 0; i < kPrescanPoints; ++i) {
        const double p = search.lo + (search.hi - search.lo) * i / (kPrescanPoints - 1);
        prescan[i] = objective(p);
        record(p, prescan[i]);
    }
    const auto [min_it, max_it] = std::minmax_element(prescan.begin(), prescan.end());
    if (*max_it - *min_it < kFlatThreshold) {
        std::ostringstream os;
        os << "flat objective: drift varies by " << (*max_it - *min_it)
           << " across the prescan (xi0 = " << xi0 << "); no exponent is preferred";
        throw FlatObjective(os.str());
    }

    const auto best = static_cast<int>(min_it - prescan.begin());
    auto grid_p = [&](int i) {
        return search.lo + (search.hi - search.lo) * i / (kPrescanPoints - 1);
    };
    const double lo = grid_p(std::max(0, best - 1));
    const double hi = grid_p(std::min(kPrescanPoints - 1, best + 1));

    const auto gs = golden_section_minimize(objective, lo, hi, tol, record);
    result.p_star = gs.x;
    result.objective_at_p_star = gs.fx;
    result.bracket = {gs.lo, gs.hi};
    // The prescan's best point may still beat every golden-section probe.
    const double p_best = grid_p(best);
    if (prescan[best] < result.objective_at_p_star && p_best >= gs.lo && p_best <= gs.hi) {
        result.p_star = p_best;
        result.objective_at_p_star = prescan[best];
    }
    result.evaluations = static_cast<int>(result.trace.size());
    return result;
}

}  // namespace fluxres
