#pragma once

// Time series of the invariant I = E / omega, from the closed form or from
// an integrated trajectory, and scalar measures of how constant they are.

#include <Eigen/Core>

#include "fluxres/dynamics.hpp"
#include "fluxres/model.hpp"

namespace fluxres {

enum class SeriesSource { kClosedForm, kNumerical };

struct InvariantSeries {
    Eigen::VectorXd times;
    Eigen::VectorXd values;
    SeriesSource source{SeriesSource::kClosedForm};

    Eigen::Index size() const { return times.size(); }
};

struct DriftMetrics {
    TimeInterval window;
    double mean{0};
    double peak_to_peak{0};
    /// Root-mean-square deviation from `mean`.
    double rms_dev{0};
    Eigen::Index count{0};
};

/// Closed-form invariant on the uniform grid horizon.start + k * sample_dt.
InvariantSeries invariant_series_closed_form(const ResonatorParams &params, const DriveSpec &drive,
                                             const InitialConditions &init, TimeInterval horizon,
                                             double sample_dt);

/// One point per detected cycle: (t_c, E_cyc / omega(t_c)). Needs >= 3 cycles.
InvariantSeries invariant_series_numerical(const Trajectory &trajectory);

/// Throws EmptyWindow if fewer than two samples fall inside `window`.
DriftMetrics drift_metrics(const InvariantSeries &series, TimeInterval window);

/// [5 Q / omega_r, 10 Q / omega_r]: late enough for the decaying term to be
/// below one percent of its initial size.
TimeInterval default_drift_window(const ResonatorParams &params);

}  // namespace fluxres
