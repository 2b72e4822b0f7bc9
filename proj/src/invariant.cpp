#include "fluxres/invariant.hpp"

#include <cmath>

namespace fluxres {

InvariantSeries invariant_series_closed_form(const ResonatorParams &params, const DriveSpec &drive,
                                             const InitialConditions &init, TimeInterval horizon,
                                             double sample_dt) {
    validate_params(params, drive, horizon);
    InvariantSeries series;
    series.source = SeriesSource::kClosedForm;
    series.times = uniform_grid(horizon, sample_dt);
    series.values = series.times.unaryExpr(
        [&](double t) { return closed_form_invariant(params, drive, init, t); });
    return series;
}

InvariantSeries invariant_series_numerical(const Trajectory &trajectory) {
    const auto cycles = detect_cycles(trajectory);
    if (cycles.size() < 3)
        throw InsufficientCycles("numerical invariant needs at least 3 cycles; trajectory has " +
                                 std::to_string(cycles.size()));
    InvariantSeries series;
    series.source = SeriesSource::kNumerical;
    series.times.resize(static_cast<Eigen::Index>(cycles.size()));
    series.values.resize(series.times.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double tc = cycles[i].midpoint();
        series.times[k] = tc;
        series.values[k] = cycle_energy(trajectory, cycles[i]) / eval_omega(trajectory.params(), tc);
    }
    return series;
}

DriftMetrics drift_metrics(const InvariantSeries &series, TimeInterval window) {
    const Eigen::Array<bool, Eigen::Dynamic, 1> inside =
        (series.times.array() >= window.start) && (series.times.array() <= window.end);
    const Eigen::Index count = inside.count();
    if (count < 2)
        throw EmptyWindow("window [" + std::to_string(window.start) + ", " +
                          std::to_string(window.end) + "] holds " + std::to_string(count) +
                          " samples; at least 2 needed");

    Eigen::VectorXd selected(count);
    for (Eigen::Index i = 0, j = 0; i < series.size(); ++i)
        if (inside[i]) selected[j++] = series.values[i];

    DriftMetrics m;
    m.window = window;
    m.count = count;
    m.peak_to_peak = selected.maxCoeff() - selected.minCoeff();
    // A constant window reports exactly (0, 0); summation would leave rounding in the mean.
    if (m.peak_to_peak == 0) {
        m.mean = selected[0];
        return m;
    }
    m.mean = selected.mean();
    m.rms_dev = std::sqrt((selected.array() - m.mean).square().mean());
    return m;
}

TimeInterval default_drift_window(const ResonatorParams &params) {
    const double tau = params.q_factor / params.omega_r;
    return {5 * tau, 10 * tau};
}

}  // namespace fluxres
